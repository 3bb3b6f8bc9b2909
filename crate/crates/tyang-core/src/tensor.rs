//! Matrices over rational functions with tensor-leg structure.
//!
//! A `MatRF` is a square matrix on a tensor product of legs, each leg a copy
//! of C^d carrying the signed index labels -n,...,-1,(0),1,...,n of the
//! ambient Lie-algebra conventions. Row-major flattening over the leg order
//! fixes the entry layout. Partial transposes, Kronecker embeddings,
//! subspace restrictions and exact inversion all live here.

use crate::poly::MultiPoly;
use crate::ratfunc::RatFunc;
use crate::scalars::{FieldElem, Rat};
use crate::series::SeriesRing;
use rayon::prelude::*;
use std::fmt;

/// Orthogonal / symplectic flavor of a transpose or of P,Q constructions.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Theta {
    Orth,
    Symp,
}

impl Theta {
    /// theta_{ij}: 1 in the orthogonal case, sign(i)sign(j) in the symplectic.
    pub fn val(self, i: i32, j: i32) -> i64 {
        match self {
            Theta::Orth => 1,
            Theta::Symp => (i.signum() * j.signum()) as i64,
        }
    }
}

/// Signed index labels of one tensor leg: -n..-1,0,1..n (0 only when odd).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Leg {
    pub labels: Vec<i32>,
}

impl Leg {
    pub fn standard(dim: usize) -> Self {
        let n = (dim / 2) as i32;
        let mut labels = Vec::with_capacity(dim);
        for i in -n..=n {
            if i == 0 && dim % 2 == 0 {
                continue;
            }
            labels.push(i);
        }
        Leg { labels }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn pos(&self, label: i32) -> usize {
        self.labels
            .iter()
            .position(|&l| l == label)
            .expect("label not present in leg")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatError {
    DimMismatch,
    Singular,
    NotScalar { row: usize, col: usize },
}

impl fmt::Display for MatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatError::DimMismatch => write!(f, "dimension mismatch"),
            MatError::Singular => write!(f, "singular matrix (zero determinant)"),
            MatError::NotScalar { row, col } => {
                write!(f, "not a scalar multiple: first offending entry ({}, {})", row, col)
            }
        }
    }
}

impl std::error::Error for MatError {}

#[derive(Clone)]
pub struct MatRF {
    pub legs: Vec<Leg>,
    pub n: usize,
    /// n*n entries, row-major.
    pub e: Vec<RatFunc>,
}

fn dims_product(legs: &[Leg]) -> usize {
    legs.iter().map(|l| l.dim()).product()
}

impl MatRF {
    pub fn zero(legs: Vec<Leg>) -> Self {
        let n = dims_product(&legs);
        MatRF {
            legs,
            n,
            e: vec![RatFunc::zero(); n * n],
        }
    }

    pub fn identity(legs: Vec<Leg>) -> Self {
        let mut m = Self::zero(legs);
        for i in 0..m.n {
            m.e[i * m.n + i] = RatFunc::one();
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> &RatFunc {
        &self.e[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RatFunc) {
        self.e[r * self.n + c] = v;
    }

    /// Builds from FieldElem entries on a single leg.
    pub fn from_scalar_rows(leg: Leg, rows: Vec<Vec<FieldElem>>) -> Self {
        let n = leg.dim();
        assert_eq!(rows.len(), n);
        let mut m = Self::zero(vec![leg]);
        for (r, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), n);
            for (c, v) in row.into_iter().enumerate() {
                m.e[r * n + c] = RatFunc::constant(v);
            }
        }
        m
    }

    /// E_{ab} on a single leg (labels a, b).
    pub fn unit(leg: &Leg, a: i32, b: i32) -> Self {
        let mut m = Self::zero(vec![leg.clone()]);
        let (r, c) = (leg.pos(a), leg.pos(b));
        m.e[r * m.n + c] = RatFunc::one();
        m
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "add: dimension mismatch");
        let e = self
            .e
            .iter()
            .zip(&o.e)
            .map(|(a, b)| a.add(b))
            .collect();
        MatRF {
            legs: self.legs.clone(),
            n: self.n,
            e,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "sub: dimension mismatch");
        let e = self
            .e
            .iter()
            .zip(&o.e)
            .map(|(a, b)| a.sub(b))
            .collect();
        MatRF {
            legs: self.legs.clone(),
            n: self.n,
            e,
        }
    }

    pub fn neg(&self) -> Self {
        MatRF {
            legs: self.legs.clone(),
            n: self.n,
            e: self.e.iter().map(|x| x.neg()).collect(),
        }
    }

    pub fn scale(&self, s: &RatFunc) -> Self {
        MatRF {
            legs: self.legs.clone(),
            n: self.n,
            e: self.e.iter().map(|x| x.mul(s)).collect(),
        }
    }

    /// Matrix product. Zero entries are skipped, which matters: R-matrices
    /// and their embeddings are extremely sparse.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "mul: dimension mismatch");
        let n = self.n;
        let compute_row = |i: usize| -> Vec<RatFunc> {
            let mut row = vec![RatFunc::zero(); n];
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    row[j] = row[j].add(&a.mul(b));
                }
            }
            row
        };
        let rows: Vec<Vec<RatFunc>> = if n >= 32 {
            (0..n).into_par_iter().map(compute_row).collect()
        } else {
            (0..n).map(compute_row).collect()
        };
        MatRF {
            legs: self.legs.clone(),
            n,
            e: rows.into_iter().flatten().collect(),
        }
    }

    pub fn map_entries(&self, f: impl Fn(&RatFunc) -> RatFunc + Sync) -> Self {
        let e: Vec<RatFunc> = if self.n >= 32 {
            self.e.par_iter().map(&f).collect()
        } else {
            self.e.iter().map(&f).collect()
        };
        MatRF {
            legs: self.legs.clone(),
            n: self.n,
            e,
        }
    }

    /// var -> alpha*var + beta on every entry.
    pub fn subst_linear(&self, ix: usize, alpha: &FieldElem, beta: &MultiPoly) -> Self {
        self.map_entries(|x| x.subst_linear(ix, alpha, beta))
    }

    pub fn subst_u_affine(&self, alpha: Rat, beta: Rat) -> Self {
        self.map_entries(|x| x.subst_u_affine(alpha.clone(), beta.clone()))
    }

    /// Kronecker product, legs concatenated.
    pub fn kron(&self, o: &Self) -> Self {
        let mut legs = self.legs.clone();
        legs.extend(o.legs.clone());
        let n = self.n * o.n;
        let mut m = MatRF {
            legs,
            n,
            e: vec![RatFunc::zero(); n * n],
        };
        for r1 in 0..self.n {
            for c1 in 0..self.n {
                let a = self.at(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..o.n {
                    for c2 in 0..o.n {
                        let b = o.at(r2, c2);
                        if b.is_zero() {
                            continue;
                        }
                        m.e[(r1 * o.n + r2) * n + (c1 * o.n + c2)] = a.mul(b);
                    }
                }
            }
        }
        m
    }

    /// Embeds `self` so that its k-th leg becomes leg `positions[k]` of a
    /// larger space, identity on all other legs. Dimension and labels of the
    /// targeted slots must match.
    pub fn embed(&self, positions: &[usize], total: &[Leg]) -> Self {
        assert_eq!(positions.len(), self.legs.len(), "embed: leg count mismatch");
        for (k, &p) in positions.iter().enumerate() {
            assert_eq!(
                self.legs[k].dim(),
                total[p].dim(),
                "embed: leg dimension mismatch"
            );
        }
        let n = dims_product(total);
        let nl = total.len();
        let dims: Vec<usize> = total.iter().map(|l| l.dim()).collect();
        // strides for row-major multi-index
        let mut strides = vec![1usize; nl];
        for k in (0..nl.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        let mut m = MatRF {
            legs: total.to_vec(),
            n,
            e: vec![RatFunc::zero(); n * n],
        };
        // own strides
        let odims: Vec<usize> = self.legs.iter().map(|l| l.dim()).collect();
        let mut ostrides = vec![1usize; odims.len()];
        for k in (0..odims.len().saturating_sub(1)).rev() {
            ostrides[k] = ostrides[k + 1] * odims[k + 1];
        }
        // spectator legs
        let spect: Vec<usize> = (0..nl).filter(|p| !positions.contains(p)).collect();
        let spect_dim: usize = spect.iter().map(|&p| dims[p]).product();
        for rown in 0..self.n {
            for coln in 0..self.n {
                let v = self.at(rown, coln);
                if v.is_zero() {
                    continue;
                }
                // decode own multi-indices
                let mut ri = vec![0usize; odims.len()];
                let mut ci = vec![0usize; odims.len()];
                let (mut rr, mut cc) = (rown, coln);
                for k in 0..odims.len() {
                    ri[k] = rr / ostrides[k];
                    rr %= ostrides[k];
                    ci[k] = cc / ostrides[k];
                    cc %= ostrides[k];
                }
                for s in 0..spect_dim {
                    // decode spectator multi-index
                    let mut sbase_r = 0usize;
                    let mut sbase_c = 0usize;
                    let mut srem = s;
                    for &p in spect.iter() {
                        let d = dims[p];
                        let ix = srem % d;
                        srem /= d;
                        sbase_r += ix * strides[p];
                        sbase_c += ix * strides[p];
                    }
                    let mut row = sbase_r;
                    let mut col = sbase_c;
                    for (k, &p) in positions.iter().enumerate() {
                        row += ri[k] * strides[p];
                        col += ci[k] * strides[p];
                    }
                    m.e[row * n + col] = v.clone();
                }
            }
        }
        m
    }

    /// Partial transpose (E_ij)^t = theta_ij E_{-j,-i} on one leg.
    pub fn partial_transpose(&self, leg: usize, theta: Theta) -> Self {
        let nl = self.legs.len();
        assert!(leg < nl);
        let dims: Vec<usize> = self.legs.iter().map(|l| l.dim()).collect();
        let mut strides = vec![1usize; nl];
        for k in (0..nl.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        let lab = &self.legs[leg].labels;
        let mut m = MatRF {
            legs: self.legs.clone(),
            n: self.n,
            e: vec![RatFunc::zero(); self.n * self.n],
        };
        for row in 0..self.n {
            let k_r = (row / strides[leg]) % dims[leg];
            for col in 0..self.n {
                let v = self.at(row, col);
                if v.is_zero() {
                    continue;
                }
                let k_c = (col / strides[leg]) % dims[leg];
                // entry E_{i j} on this leg moves to E_{-j, -i} with factor theta_ij
                let (i, j) = (lab[k_r], lab[k_c]);
                let t = theta.val(i, j);
                let new_r = row - k_r * strides[leg] + self.legs[leg].pos(-j) * strides[leg];
                let new_c = col - k_c * strides[leg] + self.legs[leg].pos(-i) * strides[leg];
                let tv = if t == 1 { v.clone() } else { v.neg() };
                m.e[new_r * self.n + new_c] = tv;
            }
        }
        m
    }

    /// Trace over one leg; the result lives on the remaining legs.
    pub fn partial_trace(&self, leg: usize) -> Self {
        let nl = self.legs.len();
        let dims: Vec<usize> = self.legs.iter().map(|l| l.dim()).collect();
        let mut strides = vec![1usize; nl];
        for k in (0..nl.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        let rest: Vec<Leg> = self
            .legs
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != leg)
            .map(|(_, l)| l.clone())
            .collect();
        let mut out = MatRF::zero(rest);
        let rn = out.n;
        for row in 0..self.n {
            let k_r = (row / strides[leg]) % dims[leg];
            let row_rest = compress_index(row, leg, &dims, &strides);
            for col in 0..self.n {
                let v = self.at(row, col);
                if v.is_zero() {
                    continue;
                }
                let k_c = (col / strides[leg]) % dims[leg];
                if k_r != k_c {
                    continue;
                }
                let col_rest = compress_index(col, leg, &dims, &strides);
                out.e[row_rest * rn + col_rest] = out.e[row_rest * rn + col_rest].add(v);
            }
        }
        out
    }

    pub fn trace(&self) -> RatFunc {
        let mut t = RatFunc::zero();
        for i in 0..self.n {
            t = t.add(self.at(i, i));
        }
        t
    }

    /// Plain full transpose (no theta, no index negation).
    pub fn transpose_plain(&self) -> Self {
        let mut m = MatRF {
            legs: self.legs.clone(),
            n: self.n,
            e: vec![RatFunc::zero(); self.n * self.n],
        };
        for r in 0..self.n {
            for c in 0..self.n {
                let v = self.at(r, c);
                if !v.is_zero() {
                    m.e[c * self.n + r] = v.clone();
                }
            }
        }
        m
    }

    /// Exact inverse by fraction-free (Bareiss) elimination over the
    /// polynomial ring: rows are cleared of denominators, elimination divides
    /// only by previous pivots (exact divisions), and the single final
    /// division by the determinant is kept as a factored denominator.
    pub fn inverse(&self) -> Result<Self, MatError> {
        let n = self.n;
        // Clear denominators row by row with the factored lcm of the row:
        // A = diag(1/d_i) M  =>  A^-1 = M^-1 diag(d_i).
        let mut m: Vec<MultiPoly> = Vec::with_capacity(n * n);
        let mut dvec: Vec<MultiPoly> = Vec::with_capacity(n);
        for i in 0..n {
            let mut lcm: Vec<(MultiPoly, u32)> = Vec::new();
            for j in 0..n {
                for (f, mult) in &self.at(i, j).den {
                    match lcm.iter_mut().find(|(g, _)| g == f) {
                        Some((_, lm)) => *lm = (*lm).max(*mult),
                        None => lcm.push((f.clone(), *mult)),
                    }
                }
            }
            for j in 0..n {
                let x = self.at(i, j);
                // cofactor = lcm / den(x), assembled from factor multiplicities
                let mut cof = MultiPoly::one();
                for (f, lm) in &lcm {
                    let have = x
                        .den
                        .iter()
                        .find(|(g, _)| g == f)
                        .map(|(_, mm)| *mm)
                        .unwrap_or(0);
                    for _ in have..*lm {
                        cof = cof.mul(f);
                    }
                }
                m.push(x.num.mul(&cof));
            }
            let mut d = MultiPoly::one();
            for (f, mult) in &lcm {
                for _ in 0..*mult {
                    d = d.mul(f);
                }
            }
            dvec.push(d);
        }
        // Bareiss-Jordan (Montante) on [M | I]: every update is
        // (pivot*a_ij - a_ik*a_kj)/prev_pivot with the division exact, and the
        // left block finishes as (last pivot) * I.
        let mut aug: Vec<MultiPoly> = vec![MultiPoly::zero(); n * 2 * n];
        let w = 2 * n;
        for i in 0..n {
            for j in 0..n {
                aug[i * w + j] = m[i * n + j].clone();
            }
            aug[i * w + n + i] = MultiPoly::one();
        }
        let mut prev = MultiPoly::one();
        for k in 0..n {
            if aug[k * w + k].is_zero() {
                let piv = (k + 1..n).find(|&r| !aug[r * w + k].is_zero());
                match piv {
                    None => return Err(MatError::Singular),
                    Some(r) => {
                        for j in 0..w {
                            aug.swap(k * w + j, r * w + j);
                        }
                    }
                }
            }
            let pivot = aug[k * w + k].clone();
            let rows: Vec<usize> = (0..n).filter(|&i| i != k).collect();
            let updated: Vec<(usize, Vec<MultiPoly>)> = rows
                .par_iter()
                .map(|&i| {
                    let mut newrow = vec![MultiPoly::zero(); w];
                    let aik = aug[i * w + k].clone();
                    for j in 0..w {
                        if j == k {
                            continue;
                        }
                        let t = pivot.mul(&aug[i * w + j]).sub(&aik.mul(&aug[k * w + j]));
                        newrow[j] = t.div_exact(&prev).expect("Bareiss division is exact");
                    }
                    (i, newrow)
                })
                .collect();
            for (i, newrow) in updated {
                for (j, val) in newrow.into_iter().enumerate() {
                    if j != k {
                        aug[i * w + j] = val;
                    }
                }
                aug[i * w + k] = MultiPoly::zero();
            }
            prev = pivot;
        }
        // The row operations maintain [F*M | F]; at the end F*M = p*I with p
        // the final pivot, so M^-1 = (right block)/p. Row swaps are already
        // absorbed into F, no sign bookkeeping is needed.
        let p_final = prev;
        if p_final.is_zero() {
            return Err(MatError::Singular);
        }
        let (lc, det_monic) = p_final.monic();
        let lci = lc.inv().map_err(|_| MatError::Singular)?;
        let det_is_const = det_monic.as_constant().is_some();
        let mut out = MatRF::zero(self.legs.clone());
        for i in 0..n {
            for j in 0..n {
                if aug[i * w + n + j].is_zero() {
                    continue;
                }
                let numer = aug[i * w + n + j].mul(&dvec[j]).scale(&lci);
                let rf = if det_is_const {
                    RatFunc::from_poly(numer)
                } else {
                    let mut r = RatFunc {
                        num: numer,
                        den: vec![(det_monic.clone(), 1)],
                    };
                    r.cancel();
                    r
                };
                out.e[i * n + j] = rf;
            }
        }
        Ok(out)
    }

    /// Restricts legs [0..g) to a subspace via a (bilinear) isometry whose
    /// columns span it: out = iota^T * self * iota on those legs.
    pub fn restrict_front(&self, g: usize, iota: &Isometry, sub: Vec<Leg>) -> Self {
        let front: usize = self.legs[..g].iter().map(|l| l.dim()).product();
        let back: usize = self.legs[g..].iter().map(|l| l.dim()).product();
        assert_eq!(front, iota.ambient, "restrict: ambient dimension mismatch");
        let sd = iota.sub_dim();
        let mut legs = sub;
        legs.extend(self.legs[g..].iter().cloned());
        let n2 = sd * back;
        let mut out = MatRF {
            legs,
            n: n2,
            e: vec![RatFunc::zero(); n2 * n2],
        };
        // nonzero weights per ambient coordinate
        let weights: Vec<Vec<(usize, &FieldElem)>> = (0..front)
            .map(|k| {
                (0..sd)
                    .filter(|&p| !iota.cols[p][k].is_zero())
                    .map(|p| (p, &iota.cols[p][k]))
                    .collect()
            })
            .collect();
        // out[(p,x),(q,y)] = sum_{k,l} iota[k][p] * self[(k,x),(l,y)] * iota[l][q]
        for k in 0..front {
            if weights[k].is_empty() {
                continue;
            }
            for l in 0..front {
                if weights[l].is_empty() {
                    continue;
                }
                for x in 0..back {
                    for y in 0..back {
                        let v = self.at(k * back + x, l * back + y);
                        if v.is_zero() {
                            continue;
                        }
                        for &(p, ckp) in &weights[k] {
                            for &(q, clq) in &weights[l] {
                                let wrf = RatFunc::constant(ckp * clq);
                                let tgt = (p * back + x) * n2 + (q * back + y);
                                out.e[tgt] = out.e[tgt].add(&v.mul(&wrf));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// The unique lambda with self = lambda * reference, or the first
    /// offending entry when no such scalar exists.
    pub fn scalar_multiple_of(&self, reference: &Self) -> Result<RatFunc, MatError> {
        assert_eq!(self.n, reference.n);
        let mut lambda: Option<RatFunc> = None;
        // find lambda from the first nonzero reference entry
        for i in 0..self.n * self.n {
            if !reference.e[i].is_zero() {
                lambda = Some(self.e[i].div(&reference.e[i]).expect("nonzero reference entry"));
                break;
            }
        }
        let lambda = lambda.ok_or(MatError::DimMismatch)?;
        for r in 0..self.n {
            for c in 0..self.n {
                let want = lambda.mul(reference.at(r, c));
                if !self.at(r, c).eq(&want) {
                    return Err(MatError::NotScalar { row: r, col: c });
                }
            }
        }
        Ok(lambda)
    }

    /// Entry-wise equality; returns the first differing entry on failure.
    pub fn eq_witness(&self, o: &Self) -> Result<(), (usize, usize, RatFunc)> {
        assert_eq!(self.n, o.n, "eq: dimension mismatch");
        for r in 0..self.n {
            for c in 0..self.n {
                if !self.at(r, c).eq(o.at(r, c)) {
                    return Err((r, c, self.at(r, c).sub(o.at(r, c))));
                }
            }
        }
        Ok(())
    }

    pub fn expand_series(&self, ix: usize, order: usize) -> Result<crate::series::TruncSeries<MatRF>, crate::ratfunc::PoleAtInfinity> {
        let mut coeffs = vec![MatRF::zero(self.legs.clone()); order + 1];
        for r in 0..self.n {
            for c in 0..self.n {
                let v = self.at(r, c);
                if v.is_zero() {
                    continue;
                }
                let cs = v.expand_at_infinity(ix, order)?;
                for (k, ck) in cs.into_iter().enumerate() {
                    coeffs[k].e[r * self.n + c] = ck;
                }
            }
        }
        Ok(crate::series::TruncSeries::from_coeffs(coeffs))
    }
}

fn compress_index(ix: usize, skip: usize, dims: &[usize], strides: &[usize]) -> usize {
    // removes the `skip` leg from a flattened multi-index
    let mut rest = 0usize;
    let mut mult = 1usize;
    for k in (0..dims.len()).rev() {
        if k == skip {
            continue;
        }
        let comp = (ix / strides[k]) % dims[k];
        rest += comp * mult;
        mult *= dims[k];
    }
    rest
}

impl SeriesRing for MatRF {
    fn s_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn s_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn s_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn s_neg(&self) -> Self {
        self.neg()
    }
    fn s_zero_like(&self) -> Self {
        MatRF::zero(self.legs.clone())
    }
    fn s_one_like(&self) -> Self {
        MatRF::identity(self.legs.clone())
    }
    fn s_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn s_scale_rat(&self, r: &Rat) -> Self {
        self.scale(&RatFunc::from_rat(r.clone()))
    }
    fn s_invert(&self) -> Option<Self> {
        self.inverse().ok()
    }
}

/// Columns of an embedding of a subspace, orthonormal for the standard
/// bilinear (not conjugate) pairing: iota^T iota = identity on the subspace.
#[derive(Clone)]
pub struct Isometry {
    pub ambient: usize,
    /// cols[p][k] = ambient coordinate k of basis vector p.
    pub cols: Vec<Vec<FieldElem>>,
}

impl Isometry {
    pub fn new(ambient: usize, cols: Vec<Vec<FieldElem>>) -> Self {
        for c in &cols {
            assert_eq!(c.len(), ambient);
        }
        let iso = Isometry { ambient, cols };
        debug_assert!(iso.is_bilinear_isometry());
        iso
    }

    pub fn sub_dim(&self) -> usize {
        self.cols.len()
    }

    pub fn is_bilinear_isometry(&self) -> bool {
        for p in 0..self.cols.len() {
            for q in 0..self.cols.len() {
                let mut acc = FieldElem::zero();
                for k in 0..self.ambient {
                    acc += &(&self.cols[p][k] * &self.cols[q][k]);
                }
                let want = if p == q {
                    FieldElem::one()
                } else {
                    FieldElem::zero()
                };
                if acc != want {
                    return false;
                }
            }
        }
        true
    }
}

/// P and Q on C^N tensor C^N with the signed-label conventions.
///
/// P permutes the factors; Q = P^{t_1} = P^{t_2}. On construction this
/// asserts P^2 = I, PQ = QP = +-Q and Q^2 = N Q.
pub fn perm_and_q(dim: usize, theta: Theta) -> (MatRF, MatRF) {
    assert!(dim >= 2);
    assert!(
        !(theta == Theta::Symp && dim % 2 == 1),
        "symplectic requires even dimension"
    );
    let leg = Leg::standard(dim);
    let legs = vec![leg.clone(), leg.clone()];
    let mut p = MatRF::zero(legs.clone());
    let mut q = MatRF::zero(legs.clone());
    let n2 = p.n;
    for (ra, &a) in leg.labels.iter().enumerate() {
        for (rb, &b) in leg.labels.iter().enumerate() {
            // P[(a,b),(c,d)] = delta_{ad} delta_{bc}
            let row = ra * dim + rb;
            let col = leg.pos(b) * dim + leg.pos(a);
            p.e[row * n2 + col] = RatFunc::one();
            // Q[(a,b),(c,d)] = theta_{ac} delta_{b,-a} delta_{d,-c}
            if b == -a {
                for (rc, &c) in leg.labels.iter().enumerate() {
                    let t = theta.val(a, c);
                    let col = rc * dim + leg.pos(-c);
                    q.e[row * n2 + col] = if t == 1 {
                        RatFunc::one()
                    } else {
                        RatFunc::from_int(-1)
                    };
                }
            }
        }
    }
    // structural sanity enforced on construction
    let id = MatRF::identity(legs);
    assert!(p.mul(&p).eq_witness(&id).is_ok(), "P^2 = I fails");
    let sign = match theta {
        Theta::Orth => 1,
        Theta::Symp => -1,
    };
    let sq = q.scale(&RatFunc::from_int(sign));
    assert!(p.mul(&q).eq_witness(&sq).is_ok(), "PQ = +-Q fails");
    assert!(q.mul(&p).eq_witness(&sq).is_ok(), "QP = +-Q fails");
    let nq = q.scale(&RatFunc::from_int(dim as i64));
    assert!(q.mul(&q).eq_witness(&nq).is_ok(), "Q^2 = N Q fails");
    (p, q)
}

/// F_ij = E_ij - theta_ij E_{-j,-i} and the two displayed bracket relations,
/// checked for every index quadruple.
pub fn f_basis_check(dim: usize, theta: Theta) -> bool {
    let leg = Leg::standard(dim);
    let f = |i: i32, j: i32| -> MatRF {
        let t = theta.val(i, j);
        let e1 = MatRF::unit(&leg, i, j);
        let e2 = MatRF::unit(&leg, -j, -i).scale(&RatFunc::from_int(t));
        e1.sub(&e2)
    };
    let labels = leg.labels.clone();
    // F_ij + theta_ij F_{-j,-i} = 0
    for &i in &labels {
        for &j in &labels {
            let lhs = f(i, j).add(&f(-j, -i).scale(&RatFunc::from_int(theta.val(i, j))));
            if !lhs.is_zero() {
                return false;
            }
        }
    }
    // [F_ij, F_kl] = d_jk F_il - d_il F_kj + theta_ij d_{j,-l} F_{k,-i} - theta_ij d_{i,-k} F_{-j,l}
    let d = |x: i32, y: i32| -> i64 {
        if x == y {
            1
        } else {
            0
        }
    };
    for &i in &labels {
        for &j in &labels {
            for &k in &labels {
                for &l in &labels {
                    let fij = f(i, j);
                    let fkl = f(k, l);
                    let lhs = fij.mul(&fkl).sub(&fkl.mul(&fij));
                    let mut rhs = MatRF::zero(vec![leg.clone()]);
                    if d(j, k) == 1 {
                        rhs = rhs.add(&f(i, l));
                    }
                    if d(i, l) == 1 {
                        rhs = rhs.sub(&f(k, j));
                    }
                    let t = theta.val(i, j);
                    if d(j, -l) == 1 {
                        rhs = rhs.add(&f(k, -i).scale(&RatFunc::from_int(t)));
                    }
                    if d(i, -k) == 1 {
                        rhs = rhs.sub(&f(-j, l).scale(&RatFunc::from_int(t)));
                    }
                    if lhs.eq_witness(&rhs).is_err() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

impl fmt::Debug for MatRF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatRF {}x{} legs {:?}", self.n, self.n, self.legs.iter().map(|l| l.dim()).collect::<Vec<_>>())?;
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| format!("{}", self.at(r, c))).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::ru_plus;

    fn c2() -> Leg {
        Leg::standard(2)
    }

    #[test]
    fn pq_identities_n2_symp() {
        let (p, q) = perm_and_q(2, Theta::Symp);
        // P + Q = I (x) I in the N=2 symplectic case
        let id = MatRF::identity(vec![c2(), c2()]);
        assert!(p.add(&q).eq_witness(&id).is_ok());
        // PQ = -Q
        assert!(p.mul(&q).eq_witness(&q.neg()).is_ok());
    }

    #[test]
    fn pq_identities_n3_orth() {
        let (_p, q) = perm_and_q(3, Theta::Orth);
        let q2 = q.mul(&q);
        assert!(q2.eq_witness(&q.scale(&RatFunc::from_int(3))).is_ok());
    }

    #[test]
    fn q_is_partial_transpose_of_p() {
        for (dim, th) in [(2, Theta::Orth), (2, Theta::Symp), (3, Theta::Orth), (4, Theta::Symp), (4, Theta::Orth)] {
            let (p, q) = perm_and_q(dim, th);
            assert!(p.partial_transpose(0, th).eq_witness(&q).is_ok());
            assert!(p.partial_transpose(1, th).eq_witness(&q).is_ok());
        }
    }

    #[test]
    fn double_transpose_restores() {
        let (p, _) = perm_and_q(2, Theta::Symp);
        let tt = p.partial_transpose(0, Theta::Symp).partial_transpose(0, Theta::Symp);
        assert!(tt.eq_witness(&p).is_ok());
        let (p, _) = perm_and_q(3, Theta::Orth);
        let tt = p.partial_transpose(1, Theta::Orth).partial_transpose(1, Theta::Orth);
        assert!(tt.eq_witness(&p).is_ok());
    }

    #[test]
    fn transpose_both_legs_is_full_transpose() {
        // t on leg 1 then leg 2 must equal J M^T J^T with J the signed
        // index-negation matrix on each leg (E_ij)^t = theta_ij E_{-j,-i}.
        for th in [Theta::Orth, Theta::Symp] {
            let (p, q) = perm_and_q(2, th);
            let m = p.scale(&ru_plus(3, 1)).add(&q.scale(&ru_plus(0, 2)));
            let t2 = m.partial_transpose(0, th).partial_transpose(1, th);
            let leg = c2();
            let mut j1 = MatRF::zero(vec![leg.clone()]);
            for &i in &leg.labels {
                let s = match th {
                    Theta::Orth => 1,
                    Theta::Symp => i.signum() as i64,
                };
                j1.set(leg.pos(-i), leg.pos(i), RatFunc::from_int(s));
            }
            let jj = j1.kron(&j1);
            let want = jj.mul(&m.transpose_plain()).mul(&jj.transpose_plain());
            assert!(t2.eq_witness(&want).is_ok());
        }
    }

    #[test]
    fn embed_disjoint_commute_order_matters_for_overlap() {
        let (p, _) = perm_and_q(2, Theta::Orth);
        let legs3 = vec![c2(), c2(), c2()];
        let p12 = p.embed(&[0, 1], &legs3);
        let p23 = p.embed(&[1, 2], &legs3);
        // overlapping embeddings do not commute
        let ab = p12.mul(&p23);
        let ba = p23.mul(&p12);
        assert!(ab.eq_witness(&ba).is_err());
        // disjoint embeddings on 4 legs commute and equal the Kronecker product
        let legs4 = vec![c2(), c2(), c2(), c2()];
        let a = p.embed(&[0, 1], &legs4);
        let b = p.embed(&[2, 3], &legs4);
        assert!(a.mul(&b).eq_witness(&b.mul(&a)).is_ok());
        assert!(a.mul(&b).eq_witness(&p.kron(&p)).is_ok());
    }

    #[test]
    fn inverse_of_shifted_permutation() {
        // (I - P/w)^-1 = (I + P/w)/(1 - w^-2), N = 2; take w = u
        let (p, _) = perm_and_q(2, Theta::Orth);
        let u = RatFunc::var(crate::poly::VAR_U);
        let ui = u.inv().unwrap();
        let m = MatRF::identity(vec![c2(), c2()]).sub(&p.scale(&ui));
        let inv = m.inverse().unwrap();
        let denom = RatFunc::one().sub(&u.mul(&u).inv().unwrap());
        let expect = MatRF::identity(vec![c2(), c2()])
            .add(&p.scale(&ui))
            .scale(&denom.inv().unwrap());
        assert!(inv.eq_witness(&expect).is_ok());
        assert!(m.mul(&inv).eq_witness(&MatRF::identity(vec![c2(), c2()])).is_ok());
        // identity inverts to identity
        let id = MatRF::identity(vec![c2()]);
        assert!(id.inverse().unwrap().eq_witness(&id).is_ok());
        // singular matrix reports
        let mut s = MatRF::zero(vec![c2()]);
        s.set(0, 0, RatFunc::one());
        assert_eq!(s.inverse().unwrap_err(), MatError::Singular);
    }

    #[test]
    fn diag_rational_inverse() {
        // diag(1, (1+4u)/(1-4u), 1) inverts entrywise
        let leg = Leg::standard(3);
        let up = crate::ratfunc::ru_lin(crate::scalars::rat_int(4), crate::scalars::rat_int(1));
        let dn = crate::ratfunc::ru_lin(crate::scalars::rat_int(-4), crate::scalars::rat_int(1));
        let mid = up.div(&dn).unwrap();
        let mut m = MatRF::identity(vec![leg.clone()]);
        m.set(1, 1, mid.clone());
        let inv = m.inverse().unwrap();
        assert!(inv.at(1, 1).eq(&mid.inv().unwrap()));
        assert!(inv.at(0, 0).is_one());
    }

    #[test]
    fn scalar_multiple_detection() {
        let id = MatRF::identity(vec![c2()]);
        let three = id.scale(&RatFunc::from_int(3));
        assert!(three.scalar_multiple_of(&id).unwrap().eq(&RatFunc::from_int(3)));
        let (p, _) = perm_and_q(2, Theta::Orth);
        match p.scalar_multiple_of(&MatRF::identity(vec![c2(), c2()])) {
            Err(MatError::NotScalar { .. }) => {}
            other => panic!("expected NotScalar, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn f_basis_relations() {
        assert!(f_basis_check(2, Theta::Symp));
        assert!(f_basis_check(3, Theta::Orth));
        assert!(f_basis_check(4, Theta::Orth));
        assert!(f_basis_check(4, Theta::Symp));
    }

    #[test]
    fn restriction_basics() {
        // identity restricts to identity on V
        let iso = crate::rkmat::v3_isometry();
        let id4 = MatRF::identity(vec![c2(), c2()]);
        let r = id4.restrict_front(2, &iso, vec![Leg::standard(3)]);
        assert!(r.eq_witness(&MatRF::identity(vec![Leg::standard(3)])).is_ok());
    }
}
