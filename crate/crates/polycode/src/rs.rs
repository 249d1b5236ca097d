//! Reed-Solomon codes: encoding, Berlekamp-Welch, Sudan and Guruswami-Sudan decoding.

use std::fmt::Debug;

use crate::bivar::{rr_roots, BiPoly};
use crate::error::{Error, Result};
use crate::gf::{Fe, Field};
use crate::linalg::{AffineSpace, Matrix};
use crate::unipoly::UniPoly;

/// A code whose messages are univariate polynomials of degree < k.
pub trait PolyCode {
    type Symbol: Clone + PartialEq + Debug;

    fn message_field(&self) -> &Field;
    fn k(&self) -> usize;
    fn length(&self) -> usize;
    /// Encodes without checking the degree bound.
    fn encode_raw(&self, f: &UniPoly) -> Vec<Self::Symbol>;

    fn agreement(&self, c: &[Self::Symbol], w: &[Self::Symbol]) -> usize {
        c.iter().zip(w).filter(|(a, b)| a == b).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeEntry<S> {
    pub message: UniPoly,
    pub codeword: Vec<S>,
    pub agreement: usize,
}

#[derive(Clone, Debug)]
pub struct DecodeOutcome<S> {
    pub entries: Vec<DecodeEntry<S>>,
    pub threshold: usize,
    pub solution_space: Option<AffineSpace>,
}

impl<S: Clone + PartialEq + Debug> DecodeOutcome<S> {
    pub fn empty(threshold: usize) -> DecodeOutcome<S> {
        DecodeOutcome { entries: Vec::new(), threshold, solution_space: None }
    }

    /// Keeps the candidates meeting the threshold, deduplicated and sorted by
    /// descending agreement, then lexicographic message.
    pub fn from_candidates<C: PolyCode<Symbol = S>>(
        code: &C,
        candidates: impl IntoIterator<Item = UniPoly>,
        w: &[S],
        threshold: usize,
    ) -> DecodeOutcome<S> {
        let mut entries: Vec<DecodeEntry<S>> = Vec::new();
        for m in candidates {
            if m.len() > code.k() || entries.iter().any(|e| e.message == m) {
                continue;
            }
            let codeword = code.encode_raw(&m);
            let agreement = code.agreement(&codeword, w);
            if agreement >= threshold {
                entries.push(DecodeEntry { message: m, codeword, agreement });
            }
        }
        entries.sort_by(|a, b| b.agreement.cmp(&a.agreement).then_with(|| a.message.coeffs().cmp(b.message.coeffs())));
        DecodeOutcome { entries, threshold, solution_space: None }
    }

    pub fn messages(&self) -> Vec<UniPoly> {
        self.entries.iter().map(|e| e.message.clone()).collect()
    }

    pub fn contains(&self, f: &UniPoly) -> bool {
        self.entries.iter().any(|e| &e.message == f)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub(crate) fn check_points(field: &Field, points: &[Fe]) -> Result<()> {
    for (i, &a) in points.iter().enumerate() {
        if !field.contains(a) {
            return Err(Error::FieldMismatch);
        }
        if points[..i].contains(&a) {
            return Err(Error::DuplicatePoint);
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsSpec {
    pub field: Field,
    pub points: Vec<Fe>,
    pub k: usize,
}

impl PolyCode for RsSpec {
    type Symbol = Fe;

    fn message_field(&self) -> &Field {
        &self.field
    }

    fn k(&self) -> usize {
        self.k
    }

    fn length(&self) -> usize {
        self.points.len()
    }

    fn encode_raw(&self, f: &UniPoly) -> Vec<Fe> {
        self.points.iter().map(|&a| f.eval(a)).collect()
    }
}

/// Largest number of interpolation constraints the dense solver accepts.
pub const GS_SYSTEM_CAP: usize = 4000;

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn ceil_sqrt(n: u64) -> u64 {
    let r = isqrt(n);
    if r * r == n {
        r
    } else {
        r + 1
    }
}

/// Smallest multiplicity r with ceil(sqrt(nk(r+1)r)) / r < t, with that degree bound.
pub fn gs_parameters(n: usize, k: usize, t: usize) -> Result<(usize, usize)> {
    for r in 1..=4096usize {
        let d = ceil_sqrt((n * k * (r + 1) * r) as u64) as usize;
        if d < t * r {
            return Ok((r, d));
        }
    }
    Err(Error::ParameterViolation(format!("no multiplicity reaches agreement {t} for n={n}, k={k}")))
}

/// Column order for interpolation unknowns X^i Y^j with i + k j <= d:
/// ascending weighted degree, ties by ascending Y-degree.
pub fn weighted_monomials(k: usize, d: usize) -> Vec<(usize, usize)> {
    let mut mons = Vec::new();
    for j in 0..=d / k.max(1) {
        for i in 0..=d - k * j {
            mons.push((i, j));
        }
        if k == 0 {
            break;
        }
    }
    mons.sort_by_key(|&(i, j)| (i + k * j, j));
    mons
}

/// Solves for a nonzero Q over the given monomials vanishing to order r at every
/// (a_i, w_i); the nullspace vector of the lowest free column is returned.
pub fn interpolate_bivariate(
    field: &Field,
    points: &[Fe],
    w: &[Fe],
    mons: &[(usize, usize)],
    r: usize,
) -> Result<BiPoly> {
    let max_i = mons.iter().map(|m| m.0).max().unwrap_or(0);
    let max_j = mons.iter().map(|m| m.1).max().unwrap_or(0);
    let mut m = Matrix::zeros(field, 0, 0);
    let mut row = vec![Fe::ZERO; mons.len()];
    for (&a, &y) in points.iter().zip(w) {
        let apow = powers(field, a, max_i);
        let ypow = powers(field, y, max_j);
        for u in 0..r {
            for v in 0..r - u {
                for (c, &(i, j)) in mons.iter().enumerate() {
                    row[c] = if i < u || j < v {
                        Fe::ZERO
                    } else {
                        let bin = field.mul(field.binom(i as u64, u as u64), field.binom(j as u64, v as u64));
                        field.mul(bin, field.mul(apow[i - u], ypow[j - v]))
                    };
                }
                m.push_row(&row);
            }
        }
    }
    if m.rows() == 0 {
        m = Matrix::zeros(field, 0, mons.len());
    }
    let null = m.nullspace();
    let v = null.into_iter().next().ok_or(Error::InterpolationFailed)?;
    let terms: Vec<(usize, usize, Fe)> = mons.iter().zip(&v).map(|(&(i, j), &c)| (i, j, c)).collect();
    Ok(BiPoly::from_terms(field, &terms))
}

pub(crate) fn powers(field: &Field, a: Fe, n: usize) -> Vec<Fe> {
    let mut out = vec![Fe::ONE; n + 1];
    for i in 1..=n {
        out[i] = field.mul(out[i - 1], a);
    }
    out
}

impl RsSpec {
    pub fn new(field: &Field, points: Vec<Fe>, k: usize) -> Result<RsSpec> {
        check_points(field, &points)?;
        let n = points.len();
        if k < 1 || k >= n || n as u64 > field.size() as u64 {
            return Err(Error::ParameterViolation(format!("need 1 <= k < n <= q, got k={k}, n={n}")));
        }
        Ok(RsSpec { field: field.clone(), points, k })
    }

    /// The first n field elements in canonical order as evaluation points.
    pub fn with_first_points(field: &Field, n: usize, k: usize) -> Result<RsSpec> {
        RsSpec::new(field, field.elements().take(n).collect(), k)
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn encode(&self, f: &UniPoly) -> Result<Vec<Fe>> {
        if f.len() > self.k {
            return Err(Error::DegreeTooLarge { degree: f.len() - 1, bound: self.k });
        }
        Ok(self.encode_raw(f))
    }

    pub fn unique_threshold(&self) -> usize {
        (self.n() + self.k).div_ceil(2)
    }

    pub fn sudan_threshold(&self) -> usize {
        isqrt((2 * self.k * self.n()) as u64) as usize + 1
    }

    pub fn gs_threshold(&self) -> usize {
        isqrt((self.k * self.n()) as u64) as usize + 1
    }

    /// Berlekamp-Welch: Q = A + B Y with deg A <= t-1, deg B <= t-k.
    pub fn unique_decode(&self, w: &[Fe]) -> DecodeOutcome<Fe> {
        let t = self.unique_threshold();
        let f = &self.field;
        if w.len() != self.n() {
            return DecodeOutcome::empty(t);
        }
        let mut mons: Vec<(usize, usize)> = (0..t).map(|i| (i, 0)).chain((0..=t - self.k).map(|i| (i, 1))).collect();
        mons.sort_by_key(|&(i, j)| (i + self.k * j, j));
        let Ok(q) = interpolate_bivariate(f, &self.points, w, &mons, 1) else {
            return DecodeOutcome::empty(t);
        };
        let a = q.ycoeff(0);
        let b = q.ycoeff(1);
        if b.is_zero() {
            return DecodeOutcome::empty(t);
        }
        let Ok((quot, rem)) = a.neg().divrem(&b) else {
            return DecodeOutcome::empty(t);
        };
        if !rem.is_zero() || quot.len() > self.k {
            return DecodeOutcome::empty(t);
        }
        DecodeOutcome::from_candidates(self, [quot], w, t)
    }

    /// Sudan: weighted degree <= floor(sqrt(2kn)), agreement >= floor(sqrt(2kn)) + 1.
    pub fn sudan_decode(&self, w: &[Fe]) -> Result<DecodeOutcome<Fe>> {
        self.check_word(w)?;
        let t = self.sudan_threshold();
        let mons = weighted_monomials(self.k, t - 1);
        let q = interpolate_bivariate(&self.field, &self.points, w, &mons, 1)?;
        let roots = rr_roots(&q, self.k)?;
        Ok(DecodeOutcome::from_candidates(self, roots, w, t))
    }

    /// Guruswami-Sudan at agreement floor(sqrt(nk)) + 1.
    pub fn gs_decode(&self, w: &[Fe], r: Option<usize>) -> Result<DecodeOutcome<Fe>> {
        self.gs_decode_at(w, self.gs_threshold(), r)
    }

    /// Guruswami-Sudan with an explicit agreement threshold t > sqrt(nk).
    pub fn gs_decode_at(&self, w: &[Fe], t: usize, r: Option<usize>) -> Result<DecodeOutcome<Fe>> {
        self.check_word(w)?;
        let (r, d) = match r {
            Some(r) if r >= 1 => (r, ceil_sqrt((self.n() * self.k * (r + 1) * r) as u64) as usize),
            Some(_) => return Err(Error::ParameterViolation("multiplicity must be positive".into())),
            None => gs_parameters(self.n(), self.k, t)?,
        };
        let q = self.gs_interpolate(w, r, d)?;
        let roots = rr_roots(&q, self.k)?;
        Ok(DecodeOutcome::from_candidates(self, roots, w, t))
    }

    /// The interpolation step of GS: weighted degree <= d, multiplicity r at every point.
    pub fn gs_interpolate(&self, w: &[Fe], r: usize, d: usize) -> Result<BiPoly> {
        let rows = self.n() * r * (r + 1) / 2;
        if rows > GS_SYSTEM_CAP {
            return Err(Error::TooLarge { size: rows as f64, cap: GS_SYSTEM_CAP });
        }
        let mons = weighted_monomials(self.k, d);
        interpolate_bivariate(&self.field, &self.points, w, &mons, r)
    }

    fn check_word(&self, w: &[Fe]) -> Result<()> {
        if w.len() != self.n() {
            return Err(Error::LengthMismatch(w.len(), self.n()));
        }
        if w.iter().any(|&x| !self.field.contains(x)) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn parse_word(&self, text: &str) -> Result<Vec<Fe>> {
        text.lines().filter(|l| !l.trim().is_empty()).map(|l| self.field.parse(l)).collect()
    }

    pub fn format_word(&self, w: &[Fe]) -> String {
        w.iter().map(|&x| self.field.format(x) + "\n").collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unipoly::Multiplicity;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(f: &Field, c: &[u32]) -> UniPoly {
        UniPoly::new(f, c.iter().map(|&x| Fe(x)).collect())
    }

    #[test]
    fn encode_examples() {
        let f = Field::prime(7).unwrap();
        let spec = RsSpec::with_first_points(&f, 7, 2).unwrap();
        assert_eq!(spec.encode(&p(&f, &[1, 1])).unwrap(), (1..7).chain(0..1).map(Fe).collect::<Vec<_>>());
        assert_eq!(spec.encode(&UniPoly::zero(&f)).unwrap(), vec![Fe(0); 7]);
        assert!(matches!(spec.encode(&p(&f, &[1, 1, 1])), Err(Error::DegreeTooLarge { .. })));
    }

    #[test]
    fn thresholds() {
        let f = Field::prime(17).unwrap();
        let spec = RsSpec::with_first_points(&f, 16, 4).unwrap();
        assert_eq!(spec.gs_threshold(), 9);
        assert_eq!(gs_parameters(16, 4, 9).unwrap(), (5, 44));
        assert_eq!(RsSpec::with_first_points(&f, 16, 1).unwrap().sudan_threshold(), 6);
        assert_eq!(weighted_monomials(4, 44).len(), 276);
    }

    #[test]
    fn berlekamp_welch_two_errors() {
        let f = Field::prime(7).unwrap();
        let spec = RsSpec::with_first_points(&f, 7, 3).unwrap();
        let msg = p(&f, &[0, 0, 1]);
        let mut w = spec.encode(&msg).unwrap();
        let out = spec.unique_decode(&w);
        assert_eq!(out.entries[0].agreement, 7);
        w[1] = f.add(w[1], Fe(1));
        w[5] = f.add(w[5], Fe(3));
        let out = spec.unique_decode(&w);
        assert_eq!(out.messages(), vec![msg]);
    }

    #[test]
    fn sudan_two_constants() {
        let f = Field::prime(17).unwrap();
        let spec = RsSpec::with_first_points(&f, 16, 1).unwrap();
        let mut w = vec![Fe(2); 7];
        w.extend(vec![Fe(5); 7]);
        w.extend([Fe(9), Fe(11)]);
        let out = spec.sudan_decode(&w).unwrap();
        assert_eq!(out.messages(), vec![p(&f, &[2]), p(&f, &[5])]);
    }

    #[test]
    fn gs_claim_multiplicity() {
        let f = Field::prime(17).unwrap();
        let spec = RsSpec::with_first_points(&f, 16, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let msg = UniPoly::random(&f, 4, &mut rng);
        let mut w = spec.encode(&msg).unwrap();
        for x in w.iter_mut().take(7) {
            *x = f.add(*x, Fe(1));
        }
        let (r, d) = gs_parameters(16, 4, 9).unwrap();
        let q = spec.gs_interpolate(&w, r, d).unwrap();
        let pf = q.substitute(&msg).unwrap();
        for i in 7..16 {
            assert!(pf.multiplicity_at(spec.points[i]) >= Multiplicity::Finite(r));
        }
        assert!(spec.gs_decode(&w, None).unwrap().contains(&msg));
        let cw = spec.encode(&msg).unwrap();
        assert!(spec.gs_decode(&cw, Some(1)).unwrap().contains(&msg));
    }
}
