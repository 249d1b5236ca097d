//! Univariate multiplicity codes: symbols are blocks of Hasse derivatives.

use rand::Rng;

use crate::bivar::LinYPoly;
use crate::error::{Error, Result};
use crate::gf::{Fe, Field};
use crate::linalg::{solve_affine, AffineSpace, Matrix};
use crate::rs::{check_points, powers, DecodeOutcome, PolyCode};
use crate::unipoly::UniPoly;
use crate::util::stream_rng;

pub const DEFAULT_ENUMERATION_CAP: usize = 100_000;

pub type Block = Vec<Fe>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultSpec {
    pub field: Field,
    pub points: Vec<Fe>,
    pub k: usize,
    pub s: usize,
}

impl PolyCode for MultSpec {
    type Symbol = Block;

    fn message_field(&self) -> &Field {
        &self.field
    }

    fn k(&self) -> usize {
        self.k
    }

    fn length(&self) -> usize {
        self.points.len()
    }

    fn encode_raw(&self, f: &UniPoly) -> Vec<Block> {
        self.points.iter().map(|&a| f.hasse_block(a, self.s)).collect()
    }
}

impl MultSpec {
    pub fn new(field: &Field, points: Vec<Fe>, k: usize, s: usize) -> Result<MultSpec> {
        check_points(field, &points)?;
        let n = points.len();
        if s == 0 || k == 0 || k >= s * n {
            return Err(Error::ParameterViolation(format!("need 1 <= k < s n, got k={k}, s={s}, n={n}")));
        }
        if k.max(s) as u64 > field.characteristic() as u64 {
            return Err(Error::ParameterViolation(format!(
                "max(k, s) = {} exceeds the characteristic {}",
                k.max(s),
                field.characteristic()
            )));
        }
        Ok(MultSpec { field: field.clone(), points, k, s })
    }

    pub fn with_first_points(field: &Field, n: usize, k: usize, s: usize) -> Result<MultSpec> {
        MultSpec::new(field, field.elements().take(n).collect(), k, s)
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Relative distance lower bound 1 - (k-1)/(s n).
    pub fn relative_distance(&self) -> f64 {
        1.0 - (self.k as f64 - 1.0) / (self.s * self.n()) as f64
    }

    pub fn encode(&self, f: &UniPoly) -> Result<Vec<Block>> {
        if f.len() > self.k {
            return Err(Error::DegreeTooLarge { degree: f.len() - 1, bound: self.k });
        }
        Ok(self.encode_raw(f))
    }

    /// ceil(((s-r+1) n + r(k-1) + 1) / ((s-r+1)(r+1)))
    pub fn cap_threshold(&self, r: usize) -> usize {
        let e = self.s - r + 1;
        (e * self.n() + r * (self.k - 1) + 1).div_ceil(e * (r + 1))
    }

    pub fn list_threshold(&self) -> usize {
        (self.n() + self.s * (self.k - 1) + 1).div_ceil(self.s + 1)
    }

    /// Interpolant with deg A < (s-r+1) t and deg B_l < (s-r+1) t - k + 1 satisfying
    /// the order-(s-r) derivative constraints at every block.
    pub fn cap_interpolate(&self, w: &[Block], r: usize) -> Result<LinYPoly> {
        self.check_word(w)?;
        if r == 0 || r > self.s {
            return Err(Error::ParameterViolation(format!("need 1 <= r <= s, got r={r}")));
        }
        let f = &self.field;
        let e = self.s - r + 1;
        let t = self.cap_threshold(r);
        let a_len = e * t;
        let b_len = (e * t + 1).saturating_sub(self.k);
        // (weighted degree, Y index, coefficient index)
        let mut cols: Vec<(usize, usize, usize)> = (0..a_len).map(|c| (c, 0, c)).collect();
        for l in 0..r {
            cols.extend((0..b_len).map(|c| (c + self.k, l + 1, c)));
        }
        cols.sort();
        let maxdeg = a_len.max(b_len);
        let mut m = Matrix::zeros(f, self.n() * e, cols.len());
        for (i, (&a, block)) in self.points.iter().zip(w).enumerate() {
            let apow = powers(f, a, maxdeg);
            for j in 0..e {
                let row = i * e + j;
                for (col, &(_, y, c)) in cols.iter().enumerate() {
                    let hasse_at = |order: usize| -> Fe {
                        if c < order {
                            Fe::ZERO
                        } else {
                            f.mul(f.binom(c as u64, order as u64), apow[c - order])
                        }
                    };
                    let v = if y == 0 {
                        hasse_at(j)
                    } else {
                        let l = y - 1;
                        (0..=j).fold(Fe::ZERO, |acc, h| {
                            let coef = f.mul(f.binom((h + l) as u64, l as u64), block[h + l]);
                            f.add(acc, f.mul(coef, hasse_at(j - h)))
                        })
                    };
                    m.set(row, col, v);
                }
            }
        }
        let v = m.nullspace().into_iter().next().ok_or(Error::InterpolationFailed)?;
        let mut a = vec![Fe::ZERO; a_len];
        let mut b = vec![vec![Fe::ZERO; b_len]; r];
        for (&(_, y, c), &x) in cols.iter().zip(&v) {
            if y == 0 {
                a[c] = x;
            } else {
                b[y - 1][c] = x;
            }
        }
        Ok(LinYPoly::new(UniPoly::new(f, a), b.into_iter().map(|c| UniPoly::new(f, c)).collect()))
    }

    /// List decoding up to capacity with r Y-variables.
    pub fn cap_decode(&self, w: &[Block], r: usize) -> Result<DecodeOutcome<Block>> {
        self.cap_decode_with_cap(w, r, DEFAULT_ENUMERATION_CAP)
    }

    pub fn cap_decode_with_cap(&self, w: &[Block], r: usize, cap: usize) -> Result<DecodeOutcome<Block>> {
        let q = self.cap_interpolate(w, r)?;
        let space = diff_solution_space(&q, self.k)?;
        let t = self.cap_threshold(r);
        self.finish(space, w, t, cap)
    }

    /// List decoding beyond the unique radius (all s Y-variables, no derivative constraints).
    pub fn list_decode(&self, w: &[Block]) -> Result<DecodeOutcome<Block>> {
        self.cap_decode(w, self.s)
    }

    pub(crate) fn finish(&self, space: AffineSpace, w: &[Block], t: usize, cap: usize) -> Result<DecodeOutcome<Block>> {
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
        let mut out =
            DecodeOutcome::from_candidates(self, members.into_iter().map(|c| UniPoly::new(&self.field, c)), w, t);
        out.solution_space = Some(space);
        Ok(out)
    }

    /// Prune over a message-space solution set of this code.
    pub fn prune(&self, space: &AffineSpace, w: &[Block], params: &PruneParams) -> Vec<UniPoly> {
        prune_list(space, |m| self.encode_raw(&UniPoly::new(&self.field, m.to_vec())), w, params)
            .into_iter()
            .map(|c| UniPoly::new(&self.field, c))
            .collect()
    }

    pub fn check_word(&self, w: &[Block]) -> Result<()> {
        if w.len() != self.n() {
            return Err(Error::LengthMismatch(w.len(), self.n()));
        }
        for b in w {
            if b.len() != self.s {
                return Err(Error::LengthMismatch(b.len(), self.s));
            }
            if b.iter().any(|&x| !self.field.contains(x)) {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(())
    }

    pub fn parse_word(&self, text: &str) -> Result<Vec<Block>> {
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split(';').map(|t| self.field.parse(t)).collect())
            .collect()
    }

    pub fn format_word(&self, w: &[Block]) -> String {
        w.iter()
            .map(|b| b.iter().map(|&x| self.field.format(x)).collect::<Vec<_>>().join(";") + "\n")
            .collect()
    }
}

/// {f : deg f < k, A + sum_l B_l f^{(l)} = 0} over the message coefficients.
pub fn diff_solution_space(q: &LinYPoly, k: usize) -> Result<AffineSpace> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = &q.field;
    let p = f.characteristic() as usize;
    if k.max(q.num_y()) > p {
        return Err(Error::ParameterViolation(format!("max(k, r) exceeds characteristic {p}")));
    }
    let maxb = q.b.iter().map(|b| b.len()).max().unwrap_or(0);
    let rows = q.a.len().max(maxb + k).max(1);
    let mut m = Matrix::zeros(f, rows, k);
    for c in 0..k {
        for (l, bl) in q.b.iter().enumerate().take(c + 1) {
            let bin = f.binom(c as u64, l as u64);
            if bin.is_zero() {
                continue;
            }
            for (d, &x) in bl.coeffs().iter().enumerate() {
                let row = d + c - l;
                m.set(row, c, f.add(m.get(row, c), f.mul(bin, x)));
            }
        }
    }
    let rhs: Vec<Fe> = (0..rows).map(|i| f.neg(q.a.coeff(i))).collect();
    solve_affine(&m, &rhs)
}

#[derive(Clone, Debug)]
pub struct PruneParams {
    pub threshold: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub repetitions: usize,
}

impl PruneParams {
    pub fn new(threshold: usize, delta: f64, epsilon: f64, seed: u64) -> PruneParams {
        PruneParams { threshold, delta, epsilon, seed, repetitions: 64 }
    }
}

/// Samples per Prune run: ceil((3r/(eps(1-delta))) ln(r/(eps(1-delta)))).
pub fn prune_samples(r: usize, delta: f64, epsilon: f64) -> usize {
    if r == 0 {
        return 0;
    }
    let x = r as f64 / (epsilon * (1.0 - delta));
    ((3.0 * x * x.ln()).ceil() as usize).max(r)
}

/// Union of independent Prune runs: each samples positions, and keeps the
/// unique space member agreeing with w there when it meets the threshold.
/// `encode` must be linear in the message vector.
pub fn prune_list<E>(space: &AffineSpace, encode: E, w: &[Vec<Fe>], params: &PruneParams) -> Vec<Vec<Fe>>
where
    E: Fn(&[Fe]) -> Vec<Vec<Fe>>,
{
    let Some(particular) = &space.particular else {
        return Vec::new();
    };
    let f = &space.field;
    let meets = |m: &[Fe]| {
        let c = encode(m);
        c.iter().zip(w).filter(|(a, b)| a == b).count() >= params.threshold
    };
    let r = space.basis.len();
    if r == 0 {
        return if meets(particular) { vec![particular.clone()] } else { Vec::new() };
    }
    let cp = encode(particular);
    let cb: Vec<Vec<Vec<Fe>>> = space.basis.iter().map(|b| encode(b)).collect();
    let n = w.len();
    let t = prune_samples(r, params.delta, params.epsilon);
    let mut out: Vec<Vec<Fe>> = Vec::new();
    for rep in 0..params.repetitions {
        let mut rng = stream_rng(params.seed, rep as u64);
        let mut m = Matrix::zeros(f, 0, 0);
        let mut rhs = Vec::new();
        for _ in 0..t {
            let i = rng.gen_range(0..n);
            for c in 0..w[i].len() {
                let row: Vec<Fe> = cb.iter().map(|b| b[i][c]).collect();
                m.push_row(&row);
                rhs.push(f.sub(w[i][c], cp[i][c]));
            }
        }
        let Ok(sol) = solve_affine(&m, &rhs) else { continue };
        if sol.dimension() != Some(0) {
            continue;
        }
        let member = space.member(sol.particular.as_ref().expect("nonempty"));
        if !out.contains(&member) && meets(&member) {
            out.push(member);
        }
    }
    out.sort();
    out
}
