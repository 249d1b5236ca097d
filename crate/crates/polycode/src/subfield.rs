//! Reed-Solomon codes over F_{q^s} evaluated on F_q points, subspace designs
//! and the evasive-subcode decoder.

use crate::bivar::LinYPoly;
use crate::error::{Error, Result};
use crate::gf::{is_prime, Fe, Field};
use crate::linalg::{solve_affine, AffineSpace, Matrix};
use crate::mult::DEFAULT_ENUMERATION_CAP;
use crate::rs::{check_points, powers, DecodeOutcome, PolyCode};
use crate::unipoly::UniPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubfieldRsSpec {
    pub base: Field,
    pub ext: Field,
    /// Evaluation points in the base field.
    pub points: Vec<Fe>,
    /// The same points embedded in the extension.
    pub ext_points: Vec<Fe>,
    pub k: usize,
    pub r: usize,
}

impl PolyCode for SubfieldRsSpec {
    type Symbol = Fe;

    fn message_field(&self) -> &Field {
        &self.ext
    }

    fn k(&self) -> usize {
        self.k
    }

    fn length(&self) -> usize {
        self.points.len()
    }

    fn encode_raw(&self, f: &UniPoly) -> Vec<Fe> {
        self.ext_points.iter().map(|&a| f.eval(a)).collect()
    }
}

/// sigma^j(f): every coefficient raised to the q^j power.
pub fn frob_twist(f: &UniPoly, j: usize) -> UniPoly {
    let field = f.field();
    UniPoly::new(field, f.coeffs().iter().map(|&c| field.frobenius(c, j)).collect())
}

impl SubfieldRsSpec {
    pub fn new(base: &Field, s: usize, points: Vec<Fe>, k: usize, r: usize, seed: u64) -> Result<SubfieldRsSpec> {
        let ext = Field::extension(base, s, seed)?;
        SubfieldRsSpec::with_extension(base, &ext, points, k, r)
    }

    pub fn with_extension(base: &Field, ext: &Field, points: Vec<Fe>, k: usize, r: usize) -> Result<SubfieldRsSpec> {
        if ext.subfield() != Some(base) {
            return Err(Error::FieldMismatch);
        }
        check_points(base, &points)?;
        let n = points.len();
        let s = ext.relative_degree();
        if k == 0 || k >= n || r == 0 || r > s {
            return Err(Error::ParameterViolation(format!("need 1 <= k < n and 1 <= r <= s, got k={k}, n={n}, r={r}, s={s}")));
        }
        let ext_points = points.iter().map(|&a| ext.embed(a)).collect();
        Ok(SubfieldRsSpec { base: base.clone(), ext: ext.clone(), points, ext_points, k, r })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn s(&self) -> usize {
        self.ext.relative_degree()
    }

    /// ceil((n + r(k-1) + 1)/(r+1))
    pub fn threshold(&self) -> usize {
        (self.n() + self.r * (self.k - 1) + 1).div_ceil(self.r + 1)
    }

    pub fn encode(&self, f: &UniPoly) -> Result<Vec<Fe>> {
        if f.len() > self.k {
            return Err(Error::DegreeTooLarge { degree: f.len() - 1, bound: self.k });
        }
        Ok(self.encode_raw(f))
    }

    /// Message polynomial from its flattened base-field coordinates (k blocks of s).
    pub fn message_from_coords(&self, c: &[Fe]) -> UniPoly {
        let s = self.s();
        UniPoly::new(&self.ext, c.chunks(s).map(|ch| self.ext.from_coords(ch)).collect())
    }

    pub fn message_coords(&self, f: &UniPoly) -> Vec<Fe> {
        (0..self.k).flat_map(|i| self.ext.coords(f.coeff(i))).collect()
    }

    /// Q = A + sum_l B_l Y_l with Q(a_i, w_i, w_i^q, ...) = 0, deg A < t, deg B_l < t-k+1.
    pub fn interpolate(&self, w: &[Fe]) -> Result<LinYPoly> {
        if w.len() != self.n() {
            return Err(Error::LengthMismatch(w.len(), self.n()));
        }
        let f = &self.ext;
        let t = self.threshold();
        let b_len = t + 1 - self.k;
        let mut cols: Vec<(usize, usize, usize)> = (0..t).map(|c| (c, 0, c)).collect();
        for l in 0..self.r {
            cols.extend((0..b_len).map(|c| (c + self.k, l + 1, c)));
        }
        cols.sort();
        let mut m = Matrix::zeros(f, self.n(), cols.len());
        for (i, (&a, &y)) in self.ext_points.iter().zip(w).enumerate() {
            let apow = powers(f, a, t);
            let ys: Vec<Fe> = (0..self.r).map(|l| f.frobenius(y, l)).collect();
            for (col, &(_, yi, c)) in cols.iter().enumerate() {
                let v = if yi == 0 { apow[c] } else { f.mul(apow[c], ys[yi - 1]) };
                m.set(i, col, v);
            }
        }
        let v = m.nullspace().into_iter().next().ok_or(Error::InterpolationFailed)?;
        let mut a = vec![Fe::ZERO; t];
        let mut b = vec![vec![Fe::ZERO; b_len]; self.r];
        for (&(_, yi, c), &x) in cols.iter().zip(&v) {
            if yi == 0 {
                a[c] = x;
            } else {
                b[yi - 1][c] = x;
            }
        }
        Ok(LinYPoly::new(UniPoly::new(f, a), b.into_iter().map(|c| UniPoly::new(f, c)).collect()))
    }

    /// The F_q-affine space of flattened messages with A + sum_l B_l sigma^l(f) = 0.
    pub fn root_space(&self, q: &LinYPoly) -> Result<AffineSpace> {
        if q.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = &self.ext;
        let s = self.s();
        let basis: Vec<Fe> = (0..s)
            .map(|m| {
                let mut unit = vec![Fe::ZERO; s];
                unit[m] = Fe::ONE;
                f.from_coords(&unit)
            })
            .collect();
        let maxb = q.b.iter().map(|b| b.len()).max().unwrap_or(0);
        let deg_rows = q.a.len().max(maxb + self.k).max(1);
        let mut m = Matrix::zeros(&self.base, deg_rows * s, self.k * s);
        for i in 0..self.k {
            for (mi, &e) in basis.iter().enumerate() {
                let mut col_poly = UniPoly::zero(f);
                for (l, bl) in q.b.iter().enumerate() {
                    col_poly = col_poly.add(&bl.scale(f.frobenius(e, l)));
                }
                let col_poly = col_poly.shl(i);
                for (j, &c) in col_poly.coeffs().iter().enumerate() {
                    for (cc, &x) in f.coords(c).iter().enumerate() {
                        m.set(j * s + cc, i * s + mi, x);
                    }
                }
            }
        }
        let mut rhs = Vec::with_capacity(deg_rows * s);
        for j in 0..deg_rows {
            rhs.extend(f.coords(q.a.coeff(j)).into_iter().map(|x| self.base.neg(x)));
        }
        solve_affine(&m, &rhs)
    }

    pub fn decode(&self, w: &[Fe]) -> Result<DecodeOutcome<Fe>> {
        self.decode_with_cap(w, DEFAULT_ENUMERATION_CAP)
    }

    pub fn decode_with_cap(&self, w: &[Fe], cap: usize) -> Result<DecodeOutcome<Fe>> {
        let q = self.interpolate(w)?;
        let space = self.root_space(&q)?;
        self.finish(space, w, cap)
    }

    fn finish(&self, space: AffineSpace, w: &[Fe], cap: usize) -> Result<DecodeOutcome<Fe>> {
        let members = match space.enumerate(cap) {
            Ok(m) => m,
            Err(Error::TooLarge { .. }) => {
                return Err(Error::SolutionSpaceTooLarge {
                    dimension: space.dimension().unwrap_or(0),
                    space: Box::new(space),
                })
            }
            Err(e) => return Err(e),
        };
        let t = self.threshold();
        let mut out = DecodeOutcome::from_candidates(self, members.iter().map(|c| self.message_from_coords(c)), w, t);
        out.solution_space = Some(space);
        Ok(out)
    }

    pub fn parse_word(&self, text: &str) -> Result<Vec<Fe>> {
        text.lines().filter(|l| !l.trim().is_empty()).map(|l| self.ext.parse(l)).collect()
    }

    pub fn format_word(&self, w: &[Fe]) -> String {
        w.iter().map(|&x| self.ext.format(x) + "\n").collect()
    }
}

/// Subspaces H_1..H_k of F_q^s (coefficient vectors of degree-<s polynomials).
#[derive(Clone, Debug)]
pub struct SubspaceDesign {
    pub base: Field,
    pub big: Field,
    pub s: usize,
    pub r: usize,
    pub d: usize,
    pub points: Vec<Fe>,
    /// Constraint matrices N_i with H_i = ker N_i.
    pub constraints: Vec<Matrix>,
    /// Basis vectors of each H_i.
    pub bases: Vec<Vec<Vec<Fe>>>,
    /// The design bound floor(s/d).
    pub t: usize,
}

impl SubspaceDesign {
    pub fn k(&self) -> usize {
        self.bases.len()
    }

    pub fn codim(&self, i: usize) -> usize {
        self.s - self.bases[i].len()
    }

    /// Sum over i of dim(span(vs) intersect H_i).
    pub fn intersection_sum(&self, vs: &[Vec<Fe>]) -> usize {
        let f = &self.base;
        let dim_v = Matrix::from_rows(f, vs).map(|m| m.rank()).unwrap_or(0);
        self.constraints
            .iter()
            .map(|n| {
                let images: Vec<Vec<Fe>> = vs.iter().map(|v| n.mul_vec(v)).collect();
                let img = Matrix::from_rows(f, &images).map(|m| m.rank()).unwrap_or(0);
                dim_v - img
            })
            .sum()
    }

    /// Rate of the subcode H_1 x ... x H_k inside F_{q^s}^k.
    pub fn rate(&self) -> f64 {
        self.bases.iter().map(|b| b.len()).sum::<usize>() as f64 / (self.s * self.k()) as f64
    }

    pub fn format(&self) -> String {
        let mut out = format!("q={} s={} r={} d={} k={} t={}\n", self.base.size(), self.s, self.r, self.d, self.k(), self.t);
        for (i, b) in self.bases.iter().enumerate() {
            out += &format!("H{} dim={}\n", i + 1, b.len());
            for v in b {
                out += &v.iter().map(|&x| self.base.format(x)).collect::<Vec<_>>().join(" ");
                out += "\n";
            }
        }
        out
    }
}

/// H_i = {f in F_q^{<s}[X] : f^{(j)}(a_i^{q^l}) = 0 for j < 2r, l < d}, with a_i in
/// F_{q^d} minus F_q taken greedily with disjoint Frobenius orbits.
pub fn subspace_design_build(base: &Field, s: usize, r: usize, d: usize, k: usize) -> Result<SubspaceDesign> {
    let q = base.size() as u64;
    let p = base.characteristic() as usize;
    if d != 1 && !is_prime(d as u64) {
        return Err(Error::ParameterViolation(format!("d={d} must be prime or 1")));
    }
    if s >= 2 * r * k {
        return Err(Error::ParameterViolation(format!("need s < 2rk, got s={s}, r={r}, k={k}")));
    }
    if (2 * r).max(s) >= p {
        return Err(Error::ParameterViolation(format!("need max(2r, s) < characteristic {p}")));
    }
    // d = 1 is the degenerate variant with points in F_q itself
    let avail = if d == 1 { q } else { (q.pow(d as u32) - q) / d as u64 };
    if k as u64 > avail {
        return Err(Error::ParameterViolation(format!("need k <= {avail} points, got k={k}")));
    }
    let big = Field::extension(base, d, 0)?;
    let mut points = Vec::with_capacity(k);
    let mut used = std::collections::HashSet::new();
    for x in big.elements() {
        if points.len() == k {
            break;
        }
        if (d > 1 && big.in_subfield(x)) || used.contains(&x) {
            continue;
        }
        let orbit: Vec<Fe> = (0..d).map(|l| big.frobenius(x, l)).collect();
        if orbit.iter().any(|o| used.contains(o)) {
            continue;
        }
        used.extend(orbit);
        points.push(x);
    }
    let mut constraints = Vec::with_capacity(k);
    let mut bases = Vec::with_capacity(k);
    for &a in &points {
        let mut n = Matrix::zeros(base, 0, 0);
        for l in 0..d {
            let b = big.frobenius(a, l);
            let bp = powers(&big, b, s);
            for j in 0..2 * r {
                let vals: Vec<Vec<Fe>> = (0..s)
                    .map(|c| {
                        let v = if c < j { Fe::ZERO } else { big.mul(big.binom(c as u64, j as u64), bp[c - j]) };
                        big.coords(v)
                    })
                    .collect();
                for m in 0..d {
                    let row: Vec<Fe> = vals.iter().map(|v| v[m]).collect();
                    n.push_row(&row);
                }
            }
        }
        bases.push(n.nullspace());
        constraints.push(n);
    }
    Ok(SubspaceDesign { base: base.clone(), big, s, r, d, points, constraints, bases, t: s / d })
}

/// Subfield decoding of order r restricted to the subcode whose i-th coefficient lies in H_{i+1}.
pub fn evasive_subcode_decode(spec: &SubfieldRsSpec, design: &SubspaceDesign, w: &[Fe], r: usize) -> Result<DecodeOutcome<Fe>> {
    if r == 0 || r > spec.s() {
        return Err(Error::ParameterViolation(format!("decode order {r} outside 1..={}", spec.s())));
    }
    let spec = &SubfieldRsSpec { r, ..spec.clone() };
    if design.k() != spec.k || design.s != spec.s() || design.base != spec.base {
        return Err(Error::DesignMismatch(format!(
            "design (k={}, s={}) against code (k={}, s={})",
            design.k(),
            design.s,
            spec.k,
            spec.s()
        )));
    }
    if design.r + 1 < spec.r {
        return Err(Error::DesignMismatch(format!(
            "design order {} cannot absorb periodic spaces of dimension {}",
            design.r,
            spec.r - 1
        )));
    }
    let q = spec.interpolate(w)?;
    let space = spec.root_space(&q)?;
    let s = spec.s();
    let mut n = Matrix::zeros(&spec.base, 0, spec.k * s);
    for (i, ni) in design.constraints.iter().enumerate() {
        for row in 0..ni.rows() {
            let mut full = vec![Fe::ZERO; spec.k * s];
            full[i * s..(i + 1) * s].copy_from_slice(ni.row(row));
            n.push_row(&full);
        }
    }
    let zeros = vec![Fe::ZERO; n.rows()];
    let restricted = space.constrain(&n, &zeros)?;
    spec.finish(restricted, w, DEFAULT_ENUMERATION_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn twist_examples() {
        let f2 = Field::prime(2).unwrap();
        let f4 = Field::extension(&f2, 2, 0).unwrap();
        let alpha = Fe(2);
        let g = UniPoly::new(&f4, vec![Fe::ZERO, alpha]);
        let tw = frob_twist(&g, 1);
        assert_eq!(tw.coeff(1), f4.mul(alpha, alpha));
        assert_eq!(f4.add(tw.coeff(1), alpha), Fe::ONE);
        assert_eq!(frob_twist(&g, 2), g);
        let f5 = Field::prime(5).unwrap();
        let f25 = Field::extension(&f5, 2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let h = UniPoly::random(&f25, 3, &mut rng);
            let a = f25.embed(f5.random(&mut rng));
            assert_eq!(f25.frobenius(h.eval(a), 1), frob_twist(&h, 1).eval(a));
        }
    }

    #[test]
    fn planted_subfield_decode() {
        let f5 = Field::prime(5).unwrap();
        let spec = SubfieldRsSpec::new(&f5, 2, f5.elements().collect(), 2, 2, 1).unwrap();
        assert_eq!(spec.threshold(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let msg = UniPoly::random(&spec.ext, 2, &mut rng);
        let mut w = spec.encode(&msg).unwrap();
        let out = spec.decode(&w).unwrap();
        assert!(out.contains(&msg));
        w[0] = spec.ext.add(w[0], Fe(1));
        w[3] = spec.ext.add(w[3], Fe(7));
        let out = spec.decode(&w).unwrap();
        assert!(out.contains(&msg));
        assert!(out.solution_space.unwrap().dimension().unwrap() <= 2);
        let q = spec.interpolate(&w).unwrap();
        for e in &out.entries {
            let mut acc = q.a.clone();
            for (l, b) in q.b.iter().enumerate() {
                acc = acc.add(&b.mul(&frob_twist(&e.message, l)));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn small_design_is_trivial() {
        let f7 = Field::prime(7).unwrap();
        let d = subspace_design_build(&f7, 4, 1, 2, 3).unwrap();
        for i in 0..3 {
            assert_eq!(d.codim(i), 4);
        }
        assert!(subspace_design_build(&f7, 4, 1, 4, 3).is_err());
        let deg = subspace_design_build(&f7, 4, 1, 1, 3).unwrap();
        for i in 0..3 {
            assert_eq!(deg.codim(i), 2);
        }
    }

    #[test]
    fn design_property_one_dim() {
        let f13 = Field::prime(13).unwrap();
        let d = subspace_design_build(&f13, 5, 1, 2, 10).unwrap();
        assert!(d.bases.iter().all(|b| b.len() == 1));
        assert!((d.rate() - 0.2).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let v: Vec<Fe> = (0..5).map(|_| f13.random(&mut rng)).collect();
            if v.iter().all(|x| x.is_zero()) {
                continue;
            }
            assert!(d.intersection_sum(&[v]) <= d.t);
        }
        for b in &d.bases {
            assert_eq!(d.intersection_sum(&[b[0].clone()]), 1);
        }
    }
}
