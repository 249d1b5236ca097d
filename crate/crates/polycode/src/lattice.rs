//! Lattices over F[X]: weak Popov short vectors, fast interpolation and the
//! divide-and-conquer differential-equation solver.

use crate::bivar::{rr_roots, BiPoly, LinYPoly};
use crate::error::{Error, Result};
use crate::gf::{Fe, Field};
use crate::linalg::AffineSpace;
use crate::mult::{diff_solution_space, Block, MultSpec, DEFAULT_ENUMERATION_CAP};
use crate::rs::{ceil_sqrt, DecodeOutcome, RsSpec};
use crate::unipoly::UniPoly;

/// Column j of `cols` is the j-th generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyLatticeBasis {
    pub field: Field,
    pub cols: Vec<Vec<UniPoly>>,
}

/// Degree norm: the largest entry degree (-1 for the zero vector).
pub fn degree_norm(v: &[UniPoly]) -> i64 {
    v.iter().map(|p| p.degree_i64()).max().unwrap_or(-1)
}

impl PolyLatticeBasis {
    pub fn new(field: &Field, cols: Vec<Vec<UniPoly>>) -> Result<PolyLatticeBasis> {
        let m = cols.len();
        if cols.iter().any(|c| c.len() != m) {
            return Err(Error::DimensionMismatch("lattice basis must be square".into()));
        }
        Ok(PolyLatticeBasis { field: field.clone(), cols })
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    /// Entry (row i, column j).
    fn entry(&self, i: usize, j: usize) -> &UniPoly {
        &self.cols[j][i]
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> UniPoly {
        let m = self.rank();
        let f = &self.field;
        if m == 0 {
            return UniPoly::one(f);
        }
        let mut a: Vec<Vec<UniPoly>> = (0..m).map(|i| (0..m).map(|j| self.entry(i, j).clone()).collect()).collect();
        let mut prev = UniPoly::one(f);
        let mut negate = false;
        for k in 0..m - 1 {
            if a[k][k].is_zero() {
                match (k + 1..m).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        negate = !negate;
                    }
                    None => return UniPoly::zero(f),
                }
            }
            for i in k + 1..m {
                for j in k + 1..m {
                    let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                    a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[m - 1][m - 1].clone();
        if negate {
            d.neg()
        } else {
            d
        }
    }

    /// Polynomial coefficients g with sum_j g_j col_j = v, if v is in the lattice.
    pub fn coordinates_of(&self, v: &[UniPoly]) -> Option<Vec<UniPoly>> {
        let det = self.determinant();
        if det.is_zero() {
            return None;
        }
        (0..self.rank())
            .map(|j| {
                let mut cols = self.cols.clone();
                cols[j] = v.to_vec();
                let num = PolyLatticeBasis { field: self.field.clone(), cols }.determinant();
                num.div_exact(&det)
            })
            .collect()
    }
}

fn pivot(col: &[UniPoly]) -> Option<(usize, usize)> {
    let deg = col.iter().filter_map(|p| p.degree()).max()?;
    let row = col.iter().rposition(|p| p.degree() == Some(deg)).expect("max exists");
    Some((row, deg))
}

/// Reduces the columns to weak Popov form in place (Mulders-Storjohann).
pub fn weak_popov(basis: &mut PolyLatticeBasis) -> Result<()> {
    loop {
        let piv: Vec<(usize, usize)> =
            basis.cols.iter().map(|c| pivot(c).ok_or(Error::SingularBasis)).collect::<Result<_>>()?;
        let mut clash = None;
        'outer: for a in 0..piv.len() {
            for b in a + 1..piv.len() {
                if piv[a].0 == piv[b].0 {
                    clash = Some((a, b));
                    break 'outer;
                }
            }
        }
        let Some((a, b)) = clash else {
            return Ok(());
        };
        let (big, small) = if piv[a].1 >= piv[b].1 { (a, b) } else { (b, a) };
        let row = piv[big].0;
        let shift = piv[big].1 - piv[small].1;
        let f = &basis.field;
        let c = f.mul(basis.cols[big][row].leading(), f.inv_nz(basis.cols[small][row].leading()));
        let sub: Vec<UniPoly> = basis.cols[small].iter().map(|p| p.scale(c).shl(shift)).collect();
        for (x, y) in basis.cols[big].iter_mut().zip(&sub) {
            *x = x.sub(y);
        }
    }
}

/// A nonzero lattice vector of degree norm at most deg(det)/m.
pub fn short_vector(basis: &PolyLatticeBasis) -> Result<Vec<UniPoly>> {
    if basis.rank() == 0 {
        return Err(Error::SingularBasis);
    }
    let mut work = basis.clone();
    weak_popov(&mut work)?;
    let best = work.cols.into_iter().min_by_key(|c| degree_norm(c)).expect("nonempty");
    Ok(best)
}

/// Degree bound ceil(sqrt(nk(l+1)l)) on the fast GS interpolant.
pub fn fast_gs_degree_bound(n: usize, k: usize, l: usize) -> usize {
    ceil_sqrt((n * k * (l + 1) * l) as u64) as usize
}

/// Lattice rank used by `fast_gs_interpolate`.
pub fn fast_gs_rank(n: usize, k: usize, l: usize) -> usize {
    let det_bound = |m: usize| (n * l * (l + 1) / 2 + k * m * (m - 1) / 2) / m;
    let m0 = ceil_sqrt(((n * (l + 1) * l) as u64).div_ceil(k as u64)) as usize + 1;
    if det_bound(m0) <= fast_gs_degree_bound(n, k, l) {
        return m0;
    }
    (1..=2 * m0 + 2).min_by_key(|&m| (det_bound(m), m)).expect("nonempty range")
}

/// Q of (1,k)-weighted degree <= ceil(sqrt(nk(l+1)l)) vanishing to order l at each (a_i, w_i).
pub fn fast_gs_interpolate(spec: &RsSpec, w: &[Fe], l: usize) -> Result<BiPoly> {
    if l == 0 {
        return Err(Error::ParameterViolation("multiplicity must be positive".into()));
    }
    if w.len() != spec.n() {
        return Err(Error::LengthMismatch(w.len(), spec.n()));
    }
    let f = &spec.field;
    let (n, k) = (spec.n(), spec.k);
    let r = UniPoly::interpolate(f, &spec.points, w)?;
    let pi = UniPoly::vanishing(f, &spec.points);
    let m = fast_gs_rank(n, k, l);
    let neg_r = r.neg();
    let neg_r_pows: Vec<UniPoly> = (0..m).scan(UniPoly::one(f), |acc, _| {
        let cur = acc.clone();
        *acc = acc.mul(&neg_r);
        Some(cur)
    })
    .collect();
    let mut cols = Vec::with_capacity(m);
    for j in 0..m {
        let pi_pow = pi.pow(l.saturating_sub(j));
        let col = (0..m)
            .map(|t| {
                if t > j {
                    UniPoly::zero(f)
                } else {
                    neg_r_pows[j - t].mul(&pi_pow).scale(f.binom(j as u64, t as u64)).shl(k * t)
                }
            })
            .collect();
        cols.push(col);
    }
    let v = short_vector(&PolyLatticeBasis::new(f, cols)?)?;
    let ys = v.iter().enumerate().map(|(t, p)| p.shr(k * t)).collect();
    Ok(BiPoly::from_ycoeffs(f, ys))
}

/// Fast GS list: agreement filter at floor(D/l) + 1 for the degree bound D.
pub fn fast_gs_decode(spec: &RsSpec, w: &[Fe], l: usize) -> Result<DecodeOutcome<Fe>> {
    let q = fast_gs_interpolate(spec, w, l)?;
    let t = fast_gs_degree_bound(spec.n(), spec.k, l) / l + 1;
    let roots = rr_roots(&q, spec.k)?;
    Ok(DecodeOutcome::from_candidates(spec, roots, w, t))
}

/// Polynomial with prescribed Hasse derivatives derivs[i][j] = R^{(j)}(points[i]).
pub fn hermite_interpolate(field: &Field, points: &[Fe], derivs: &[Vec<Fe>]) -> Result<UniPoly> {
    let mut total = UniPoly::zero(field);
    let mut modulus = UniPoly::one(field);
    for (&a, d) in points.iter().zip(derivs) {
        let local = UniPoly::new(field, d.clone()).shift(field.neg(a));
        let mi = UniPoly::linear(field, a).pow(d.len());
        // total' = total + modulus * ((local - total) * modulus^{-1} mod mi)
        let (g, s, _) = modulus.xgcd(&mi)?;
        if g.degree() != Some(0) {
            return Err(Error::DuplicatePoint);
        }
        let corr = local.sub(&total).mul(&s).rem(&mi)?;
        total = total.add(&modulus.mul(&corr));
        modulus = modulus.mul(&mi);
    }
    Ok(total)
}

/// X-degree bound floor(n(s-r+1)/(r+1)) of `fast_mult_interpolate`.
pub fn fast_mult_degree_bound(spec: &MultSpec, r: usize) -> usize {
    spec.n() * (spec.s - r + 1) / (r + 1)
}

/// Interpolant satisfying tau^{(j)}(Q)(a_i, w_i) = 0 for j <= s-r, found as a short
/// vector of the lattice spanned by prod(X-a_i)^{s-r+1} and Y_l - R_l.
pub fn fast_mult_interpolate(spec: &MultSpec, w: &[Block], r: usize) -> Result<LinYPoly> {
    spec.check_word(w)?;
    if r == 0 || r > spec.s {
        return Err(Error::ParameterViolation(format!("need 1 <= r <= s, got r={r}")));
    }
    let f = &spec.field;
    let e = spec.s - r + 1;
    let mut cols = Vec::with_capacity(r + 1);
    for l in 0..r {
        let derivs: Vec<Vec<Fe>> = w
            .iter()
            .map(|block| (0..e).map(|j| f.mul(f.binom((l + j) as u64, j as u64), block[l + j])).collect())
            .collect();
        let rl = hermite_interpolate(f, &spec.points, &derivs)?;
        let mut col = vec![UniPoly::zero(f); r + 1];
        col[l] = UniPoly::one(f);
        col[r] = rl.neg();
        cols.push(col);
    }
    let mut last = vec![UniPoly::zero(f); r + 1];
    last[r] = UniPoly::vanishing(f, &spec.points).pow(e);
    cols.push(last);
    let v = short_vector(&PolyLatticeBasis::new(f, cols)?)?;
    Ok(LinYPoly::new(v[r].clone(), v[..r].to_vec()))
}

/// Fast multiplicity decoding: lattice interpolation, then the fast solver.
pub fn fast_mult_decode(spec: &MultSpec, w: &[Block], r: usize) -> Result<DecodeOutcome<Block>> {
    let q = fast_mult_interpolate(spec, w, r)?;
    let space = fast_diff_solve(&q, spec.k)?;
    let e = spec.s - r + 1;
    let t = (fast_mult_degree_bound(spec, r) + spec.k - 1) / e + 1;
    spec.finish(space, w, t, DEFAULT_ENUMERATION_CAP)
}

/// Solves C + P g + X S g' = 0 mod X^kk for g of degree < kk, assuming
/// P(0) + j S(0) != 0 for j < kk. Splits g = g0 + X^h g1 with h = ceil(kk/2).
fn solve_first_order(c: &UniPoly, p: &UniPoly, s: &UniPoly, kk: usize) -> Option<UniPoly> {
    let f = c.field().clone();
    if kk == 0 {
        return Some(UniPoly::zero(&f));
    }
    if kk == 1 {
        let den = p.coeff(0);
        if den.is_zero() {
            return None;
        }
        return Some(UniPoly::constant(&f, f.neg(f.mul(c.coeff(0), f.inv_nz(den)))));
    }
    let h = kk.div_ceil(2);
    let g0 = solve_first_order(&c.mod_xpow(kk), &p.mod_xpow(kk), &s.mod_xpow(kk), h)?;
    let resid = c
        .add(&p.mul(&g0))
        .add(&s.mul(&g0.hasse(1)).shl(1))
        .mod_xpow(kk);
    if resid.coeffs().iter().take(h).any(|x| !x.is_zero()) {
        return None;
    }
    let c1 = resid.shr(h);
    let p1 = p.add(&s.scale(f.from_i64(h as i64)));
    let g1 = solve_first_order(&c1, &p1, s, kk - h)?;
    Some(g0.add(&g1.shl(h)))
}

fn unshift_space(space: AffineSpace, a: Fe, k: usize) -> AffineSpace {
    let f = space.field.clone();
    let back = |v: &[Fe]| UniPoly::new(&f, v.to_vec()).shift(f.neg(a)).padded(k);
    AffineSpace {
        particular: space.particular.as_ref().map(|p| back(p)),
        basis: space.basis.iter().map(|b| back(b)).collect(),
        field: space.field.clone(),
        ambient_dim: k,
    }
}

/// Same set as `diff_solution_space`; orders 0 and 1 use the halving recursion
/// in coordinates shifted to a point where the last B does not vanish.
pub fn fast_diff_solve(q: &LinYPoly, k: usize) -> Result<AffineSpace> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = q.field.clone();
    let Some(last) = q.b.iter().rposition(|b| !b.is_zero()) else {
        return Ok(AffineSpace::empty(&f, k));
    };
    if last >= 2 || k == 0 {
        return diff_solution_space(q, k);
    }
    let Some(a) = f.elements().find(|&a| !q.b[last].eval(a).is_zero()) else {
        return diff_solution_space(q, k);
    };
    let sa = q.a.shift(a);
    let sb: Vec<UniPoly> = q.b[..=last].iter().map(|b| b.shift(a)).collect();
    let shifted = LinYPoly::new(sa.clone(), sb.clone());
    let space = if last == 0 {
        match solve_first_order(&sa, &sb[0], &UniPoly::zero(&f), k) {
            Some(g) if shifted.substitute(&g)?.is_zero() => AffineSpace::point(&f, g.padded(k)),
            _ => AffineSpace::empty(&f, k),
        }
    } else {
        if k as u64 > f.characteristic() as u64 {
            return diff_solution_space(q, k);
        }
        let p = sb[0].shl(1).add(&sb[1]);
        let mut cands = Vec::with_capacity(2);
        for alpha in [Fe::ZERO, Fe::ONE] {
            let c = sa.add(&sb[0].scale(alpha));
            let Some(g) = solve_first_order(&c, &p, &sb[1], k - 1) else {
                return diff_solution_space(q, k);
            };
            cands.push(UniPoly::constant(&f, alpha).add(&g.shl(1)));
        }
        let (f0, f1) = (&cands[0], &cands[1]);
        let dir = f1.sub(f0);
        let res0 = shifted.substitute(f0)?;
        let dres = shifted.substitute(f1)?.sub(&res0);
        if dres.is_zero() {
            if res0.is_zero() {
                AffineSpace { field: f.clone(), ambient_dim: k, particular: Some(f0.padded(k)), basis: vec![dir.padded(k)] }
            } else {
                AffineSpace::empty(&f, k)
            }
        } else {
            let i = dres.coeffs().iter().position(|x| !x.is_zero()).expect("nonzero");
            let lambda = f.neg(f.mul(res0.coeff(i), f.inv_nz(dres.coeff(i))));
            if res0.add(&dres.scale(lambda)).is_zero() {
                AffineSpace::point(&f, f0.add(&dir.scale(lambda)).padded(k))
            } else {
                AffineSpace::empty(&f, k)
            }
        }
    };
    Ok(unshift_space(space, a, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(f: &Field, c: &[u32]) -> UniPoly {
        UniPoly::new(f, c.iter().map(|&x| Fe(x)).collect())
    }

    #[test]
    fn short_vector_examples() {
        let f = Field::prime(7).unwrap();
        let id = PolyLatticeBasis::new(&f, vec![vec![UniPoly::one(&f), UniPoly::zero(&f)], vec![UniPoly::zero(&f), UniPoly::one(&f)]])
            .unwrap();
        assert_eq!(degree_norm(&short_vector(&id).unwrap()), 0);
        let x2 = UniPoly::monomial(&f, Fe(1), 2);
        let x4 = UniPoly::monomial(&f, Fe(1), 4);
        let diag = PolyLatticeBasis::new(&f, vec![vec![x2.clone(), UniPoly::zero(&f)], vec![UniPoly::zero(&f), x4]]).unwrap();
        assert_eq!(short_vector(&diag).unwrap(), vec![x2, UniPoly::zero(&f)]);
        let sing = PolyLatticeBasis::new(&f, vec![vec![UniPoly::one(&f), UniPoly::one(&f)], vec![UniPoly::one(&f), UniPoly::one(&f)]])
            .unwrap();
        assert!(matches!(short_vector(&sing), Err(Error::SingularBasis)));
    }

    #[test]
    fn short_vector_random_bound_and_membership() {
        let f = Field::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let m = rng.gen_range(2..4);
            let cols: Vec<Vec<UniPoly>> =
                (0..m).map(|_| (0..m).map(|_| UniPoly::random(&f, rng.gen_range(0..6), &mut rng)).collect()).collect();
            let b = PolyLatticeBasis::new(&f, cols).unwrap();
            let det = b.determinant();
            if det.is_zero() {
                continue;
            }
            let v = short_vector(&b).unwrap();
            assert!(degree_norm(&v) >= 0);
            assert!(degree_norm(&v) as usize <= det.degree().unwrap() / m);
            assert!(b.coordinates_of(&v).is_some());
        }
    }

    #[test]
    fn hermite_matches_derivatives() {
        let f = Field::prime(11).unwrap();
        let pts = [Fe(1), Fe(4), Fe(7)];
        let derivs = vec![vec![Fe(2), Fe(3)], vec![Fe(0), Fe(5)], vec![Fe(9), Fe(1)]];
        let h = hermite_interpolate(&f, &pts, &derivs).unwrap();
        assert!(h.len() <= 6);
        for (&a, d) in pts.iter().zip(&derivs) {
            assert_eq!(&h.hasse_block(a, 2), d);
        }
    }

    #[test]
    fn fast_gs_small() {
        let f = Field::prime(17).unwrap();
        let spec = RsSpec::with_first_points(&f, 16, 4).unwrap();
        let msg = p(&f, &[1, 2, 3, 4]);
        let w = spec.encode(&msg).unwrap();
        let q = fast_gs_interpolate(&spec, &w, 1).unwrap();
        assert!(q.substitute(&msg).unwrap().is_zero());
        assert_eq!(fast_gs_rank(16, 4, 2), 6);
    }

    #[test]
    fn fast_diff_examples() {
        let f = Field::prime(7).unwrap();
        let a = UniPoly::linear(&f, f.neg(Fe(1))).mul(&UniPoly::linear(&f, f.neg(Fe(2)))).neg();
        let q = LinYPoly::new(a, vec![p(&f, &[1, 1])]);
        let s = fast_diff_solve(&q, 2).unwrap();
        assert_eq!(s, AffineSpace::point(&f, vec![Fe(2), Fe(1)]));
        let f13 = Field::prime(13).unwrap();
        let x2 = p(&f13, &[0, 0, 1]);
        let q = LinYPoly::new(p(&f13, &[0, 0, 10]), vec![UniPoly::one(&f13), UniPoly::x(&f13)]);
        let fast = fast_diff_solve(&q, 8).unwrap();
        assert!(fast.contains(&x2.padded(8)));
        let slow = diff_solution_space(&q, 8).unwrap();
        let mut e1 = fast.enumerate(1000).unwrap();
        let mut e2 = slow.enumerate(1000).unwrap();
        e1.sort();
        e2.sort();
        assert_eq!(e1, e2);
    }
}
