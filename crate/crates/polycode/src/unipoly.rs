//! Univariate polynomials over a `Field`, with Hasse derivatives.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{Fe, Field};

const KARATSUBA_CUTOFF: usize = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Fe>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly{:?}", self.coeffs.iter().map(|c| c.0).collect::<Vec<_>>())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|&c| self.field.format(c)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Root multiplicity; `Infinite` only for the zero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Multiplicity {
    Finite(usize),
    Infinite,
}

impl UniPoly {
    pub fn new(field: &Field, mut coeffs: Vec<Fe>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> UniPoly {
        UniPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(field: &Field, c: Fe) -> UniPoly {
        UniPoly::new(field, vec![c])
    }

    pub fn one(field: &Field) -> UniPoly {
        UniPoly::constant(field, Fe::ONE)
    }

    pub fn x(field: &Field) -> UniPoly {
        UniPoly::monomial(field, Fe::ONE, 1)
    }

    pub fn monomial(field: &Field, c: Fe, n: usize) -> UniPoly {
        let mut coeffs = vec![Fe::ZERO; n + 1];
        coeffs[n] = c;
        UniPoly::new(field, coeffs)
    }

    /// X - a
    pub fn linear(field: &Field, a: Fe) -> UniPoly {
        UniPoly::new(field, vec![field.neg(a), Fe::ONE])
    }

    /// The product of (X - a) over all given points.
    pub fn vanishing(field: &Field, points: &[Fe]) -> UniPoly {
        points.iter().fold(UniPoly::one(field), |acc, &a| acc.mul(&UniPoly::linear(field, a)))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Fe> {
        self.coeffs
    }

    /// Coefficient vector padded (or truncated) to length `len`.
    pub fn padded(&self, len: usize) -> Vec<Fe> {
        (0..len).map(|i| self.coeff(i)).collect()
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with -1 standing in for the zero polynomial.
    pub fn degree_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    /// Number of coefficient slots, i.e. degree + 1 (0 for zero).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    fn check(&self, other: &UniPoly) {
        assert!(self.field == other.field, "polynomials over different fields");
    }

    pub fn same_field(&self, other: &UniPoly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        self.check(other);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(f, (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.check(other);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(f, (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self) -> UniPoly {
        let f = &self.field;
        UniPoly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: Fe) -> UniPoly {
        let f = &self.field;
        UniPoly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// f * X^n
    pub fn shl(&self, n: usize) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Fe::ZERO; n];
        coeffs.extend_from_slice(&self.coeffs);
        UniPoly { field: self.field.clone(), coeffs }
    }

    /// floor(f / X^n)
    pub fn shr(&self, n: usize) -> UniPoly {
        UniPoly::new(&self.field, self.coeffs.iter().skip(n).copied().collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(&self.field);
        }
        UniPoly::new(&self.field, mul_slices(&self.field, &self.coeffs, &other.coeffs))
    }

    pub fn divrem(&self, g: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        self.same_field(g)?;
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let dg = g.coeffs.len() - 1;
        if self.coeffs.len() <= dg {
            return Ok((UniPoly::zero(f), self.clone()));
        }
        let lc_inv = f.inv_nz(g.leading());
        let mut r = self.coeffs.clone();
        let mut q = vec![Fe::ZERO; r.len() - dg];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dg], lc_inv);
            q[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &gj) in g.coeffs.iter().enumerate() {
                r[i + j] = f.sub(r[i + j], f.mul(c, gj));
            }
        }
        r.truncate(dg);
        Ok((UniPoly::new(f, q), UniPoly::new(f, r)))
    }

    /// Exact quotient if g divides self.
    pub fn div_exact(&self, g: &UniPoly) -> Option<UniPoly> {
        match self.divrem(g) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn rem(&self, g: &UniPoly) -> Result<UniPoly> {
        Ok(self.divrem(g)?.1)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv_nz(self.leading()))
    }

    /// Monic gcd.
    pub fn gcd(&self, g: &UniPoly) -> Result<UniPoly> {
        self.same_field(g)?;
        let (mut a, mut b) = (self.clone(), g.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Extended Euclid: (g, s, t) with s*self + t*other = g, g monic.
    pub fn xgcd(&self, other: &UniPoly) -> Result<(UniPoly, UniPoly, UniPoly)> {
        self.same_field(other)?;
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UniPoly::one(f), UniPoly::zero(f));
        let (mut t0, mut t1) = (UniPoly::zero(f), UniPoly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            r0 = std::mem::replace(&mut r1, r);
            let s2 = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return Ok((r0, s0, t0));
        }
        let c = f.inv_nz(r0.leading());
        Ok((r0.scale(c), s0.scale(c), t0.scale(c)))
    }

    /// f(X + a)
    pub fn shift(&self, a: Fe) -> UniPoly {
        let f = &self.field;
        let mut c = self.coeffs.clone();
        let n = c.len();
        // repeated synthetic division (Taylor shift)
        for i in 0..n {
            for j in (i..n - 1).rev() {
                c[j] = f.add(c[j], f.mul(a, c[j + 1]));
            }
        }
        UniPoly::new(f, c)
    }

    /// f mod X^k
    pub fn mod_xpow(&self, k: usize) -> UniPoly {
        UniPoly::new(&self.field, self.coeffs.iter().take(k).copied().collect())
    }

    pub fn pow(&self, e: usize) -> UniPoly {
        let mut acc = UniPoly::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Composition self(g(X)).
    pub fn compose(&self, g: &UniPoly) -> UniPoly {
        self.check(g);
        let mut acc = UniPoly::zero(&self.field);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&UniPoly::constant(&self.field, c));
        }
        acc
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn eval_many(&self, points: &[Fe]) -> Result<Vec<Fe>> {
        if points.iter().any(|&a| !self.field.contains(a)) {
            return Err(Error::FieldMismatch);
        }
        Ok(points.iter().map(|&a| self.eval(a)).collect())
    }

    /// Lagrange interpolation through (points[i], values[i]) with barycentric weights.
    pub fn interpolate(field: &Field, points: &[Fe], values: &[Fe]) -> Result<UniPoly> {
        if points.len() != values.len() {
            return Err(Error::LengthMismatch(points.len(), values.len()));
        }
        let n = points.len();
        for i in 0..n {
            for j in 0..i {
                if points[i] == points[j] {
                    return Err(Error::DuplicatePoint);
                }
            }
        }
        let weights: Vec<Fe> = (0..n)
            .map(|i| {
                let prod = (0..n)
                    .filter(|&j| j != i)
                    .fold(Fe::ONE, |acc, j| field.mul(acc, field.sub(points[i], points[j])));
                field.inv_nz(prod)
            })
            .collect();
        let full = UniPoly::vanishing(field, points);
        let mut out = vec![Fe::ZERO; n];
        for i in 0..n {
            let c = field.mul(weights[i], values[i]);
            if c.is_zero() {
                continue;
            }
            // full / (X - a_i) by synthetic division
            let (q, _) = full.divrem(&UniPoly::linear(field, points[i]))?;
            for (j, &qj) in q.coeffs.iter().enumerate() {
                out[j] = field.add(out[j], field.mul(c, qj));
            }
        }
        Ok(UniPoly::new(field, out))
    }

    /// The i-th Hasse derivative: X^n maps to C(n, i) X^{n-i}.
    pub fn hasse(&self, i: usize) -> UniPoly {
        let f = &self.field;
        UniPoly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(i)
                .map(|(n, &c)| f.mul(c, f.binom(n as u64, i as u64)))
                .collect(),
        )
    }

    /// (f(a), f^{(1)}(a), ..., f^{(s-1)}(a))
    pub fn hasse_block(&self, a: Fe, s: usize) -> Vec<Fe> {
        let shifted = self.shift(a);
        (0..s).map(|i| shifted.coeff(i)).collect()
    }

    pub fn multiplicity_at(&self, a: Fe) -> Multiplicity {
        if self.is_zero() {
            return Multiplicity::Infinite;
        }
        let shifted = self.shift(a);
        Multiplicity::Finite(shifted.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0))
    }

    pub fn parse(field: &Field, text: &str) -> Result<UniPoly> {
        let coeffs = text.split_whitespace().map(|t| field.parse(t)).collect::<Result<Vec<_>>>()?;
        Ok(UniPoly::new(field, coeffs))
    }

    pub fn random<R: rand::Rng + ?Sized>(field: &Field, len: usize, rng: &mut R) -> UniPoly {
        UniPoly::new(field, (0..len).map(|_| field.random(rng)).collect())
    }
}

fn mul_slices(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) <= KARATSUBA_CUTOFF {
        let mut out = vec![Fe::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        return out;
    }
    let h = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(h.min(a.len()));
    let (b0, b1) = b.split_at(h.min(b.len()));
    let z0 = mul_slices(f, a0, b0);
    let z2 = mul_slices(f, a1, b1);
    let sa = add_slices(f, a0, a1);
    let sb = add_slices(f, b0, b1);
    let mut z1 = mul_slices(f, &sa, &sb);
    for (i, &c) in z0.iter().enumerate() {
        z1[i] = f.sub(z1[i], c);
    }
    for (i, &c) in z2.iter().enumerate() {
        z1[i] = f.sub(z1[i], c);
    }
    let mut out = vec![Fe::ZERO; a.len() + b.len() - 1];
    for (i, &c) in z0.iter().enumerate() {
        out[i] = f.add(out[i], c);
    }
    for (i, &c) in z1.iter().enumerate() {
        if i + h < out.len() {
            out[i + h] = f.add(out[i + h], c);
        }
    }
    for (i, &c) in z2.iter().enumerate() {
        out[i + 2 * h] = f.add(out[i + 2 * h], c);
    }
    out
}

fn add_slices(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&Fe::ZERO), *b.get(i).unwrap_or(&Fe::ZERO)))
        .collect()
}
