//! Prime and extension fields F_{p^d}.
//!
//! Elements are stored as a packed index `sum c_i p^i` of their little-endian
//! coefficient vector in the modulus basis, so prime-subfield elements are
//! exactly the indices `0..p`.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const MAX_DIGITS: usize = 32;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Sub {
    base: Field,
    beta: Vec<Fe>,
    basis: Vec<Fe>,
    coord: Vec<Vec<u32>>,
}

struct Inner {
    p: u32,
    d: usize,
    q: u32,
    modulus: Vec<u32>,
    pw: Vec<u32>,
    fact: Vec<u32>,
    inv_fact: Vec<u32>,
    base_degree: usize,
    sub: Option<Sub>,
}

/// A finite field F_{p^d}. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.d == other.0.d
                && self.0.modulus == other.0.modulus
                && self.0.base_degree == other.0.base_degree)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.d == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.d, self.0.modulus)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let quot = r / new_r;
        (t, new_t) = (new_t, t - quot * new_t);
        (r, new_r) = (new_r, r - quot * new_r);
    }
    (t.rem_euclid(p as i64)) as u32
}

// Dense polynomials over F_p as little-endian u32 vectors; used only for
// the irreducibility test.
mod fp {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lc_inv = super::inv_mod(m[dm], p) as u64;
        while r.len() > dm {
            let top = r.len() - 1;
            let c = (r[top] as u64 * lc_inv) % p as u64;
            let shift = top - dm;
            for (i, &mi) in m.iter().enumerate() {
                let sub = (c * mi as u64) % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let out: Vec<u32> = out.into_iter().map(|v| v as u32).collect();
        rem(&out, m, p)
    }

    pub fn powmod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut result = vec![1u32];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mulmod(&result, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        result
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out: Vec<u32> = (0..n)
            .map(|i| {
                let x = *a.get(i).unwrap_or(&0);
                let y = *b.get(i).unwrap_or(&0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }
}

/// Irreducibility of a monic degree-d polynomial over F_p: no factor of
/// degree <= d/2, i.e. gcd(X^{p^i} - X, f) = 1 for 1 <= i <= d/2.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let d = modulus.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    let mut h = x.clone();
    for _ in 1..=d / 2 {
        h = fp::powmod(&h, p as u64, modulus, p);
        let g = fp::gcd(&fp::sub(&h, &x, p), modulus, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn small_binom(n: u64, k: u64, p: u32) -> u32 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..k {
        num = num * ((n - i) % p as u64) % p as u64;
        den = den * ((i + 1) % p as u64) % p as u64;
    }
    (num * inv_mod(den as u32, p) as u64 % p as u64) as u32
}

impl Field {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1, None, 0)
    }

    /// F_{p^d}. A missing modulus for d > 1 is found by seeded random search.
    pub fn new(p: u32, d: usize, modulus: Option<&[u32]>, seed: u64) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if d == 0 || (p as f64).powi(d as i32) > (1u64 << 31) as f64 {
            return Err(Error::ParameterViolation(format!("unsupported degree {d}")));
        }
        let modulus = match modulus {
            Some(m) => {
                if d == 1 && m.is_empty() {
                    vec![0, 1]
                } else {
                    if m.len() != d + 1 {
                        return Err(Error::DegreeMismatch { want: d, got: m.len().saturating_sub(1) });
                    }
                    if m[d] != 1 || m.iter().any(|&c| c >= p) {
                        return Err(Error::Parse("modulus must be monic with residues below p".into()));
                    }
                    if !is_irreducible(m, p) {
                        return Err(Error::NotIrreducible(p));
                    }
                    m.to_vec()
                }
            }
            None if d == 1 => vec![0, 1],
            None => find_irreducible(p, d, seed),
        };
        Ok(Field::build(p, d, modulus, 1, None))
    }

    fn build(p: u32, d: usize, modulus: Vec<u32>, base_degree: usize, sub: Option<Sub>) -> Field {
        let mut pw = vec![1u32; d + 1];
        for i in 1..=d {
            pw[i] = pw[i - 1].wrapping_mul(p);
        }
        let q = pw[d];
        let (mut fact, mut inv_fact) = (Vec::new(), Vec::new());
        if p <= 1 << 16 {
            fact = vec![1u32; p as usize];
            for i in 1..p as usize {
                fact[i] = (fact[i - 1] as u64 * i as u64 % p as u64) as u32;
            }
            inv_fact = fact.iter().map(|&f| inv_mod(f, p)).collect();
        }
        Field(Arc::new(Inner { p, d, q, modulus, pw, fact, inv_fact, base_degree, sub }))
    }

    /// Builds F_{q^s} for q = |base| with an explicit embedding of `base` and
    /// an F_q-basis for coordinate flattening.
    pub fn extension(base: &Field, s: usize, seed: u64) -> Result<Field> {
        if s == 0 {
            return Err(Error::ParameterViolation("extension degree must be positive".into()));
        }
        let p = base.p();
        let d = base.degree();
        let n = d * s;
        let big = Field::new(p, n, None, seed)?;
        let beta = if d == 1 {
            Fe::ONE
        } else {
            let bm = &base.0.modulus;
            (1..big.size())
                .map(Fe)
                .find(|&x| {
                    let mut acc = Fe::ZERO;
                    for &c in bm.iter().rev() {
                        acc = big.add(big.mul(acc, x), Fe(c));
                    }
                    acc.is_zero()
                })
                .ok_or(Error::NotIrreducible(p))?
        };
        let mut beta_pows = vec![Fe::ONE; d];
        for i in 1..d {
            beta_pows[i] = big.mul(beta_pows[i - 1], beta);
        }
        let alpha = if n == 1 { Fe::ONE } else { Fe(p) };
        let mut basis = vec![Fe::ONE; s];
        for j in 1..s {
            basis[j] = big.mul(basis[j - 1], alpha);
        }
        // column j*d+i holds the F_p digits of beta^i alpha^j
        let mut m = vec![vec![0u32; n]; n];
        for j in 0..s {
            for i in 0..d {
                let e = big.mul(beta_pows[i], basis[j]);
                for (r, dig) in big.digits(e).into_iter().enumerate() {
                    m[r][j * d + i] = dig;
                }
            }
        }
        let coord = invert_fp(m, p).ok_or(Error::NotIrreducible(p))?;
        let modulus = big.0.modulus.clone();
        Ok(Field::build(
            p,
            n,
            modulus,
            d,
            Some(Sub { base: base.clone(), beta: beta_pows, basis, coord }),
        ))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.d
    }

    pub fn size(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients, absent for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        if self.0.d == 1 {
            None
        } else {
            Some(&self.0.modulus)
        }
    }

    /// Size of the designated base subfield (p unless built by `extension`).
    pub fn q_base(&self) -> u64 {
        (self.0.p as u64).pow(self.0.base_degree as u32)
    }

    pub fn subfield(&self) -> Option<&Field> {
        self.0.sub.as_ref().map(|s| &s.base)
    }

    /// Degree of this field over its designated base subfield.
    pub fn relative_degree(&self) -> usize {
        self.0.d / self.0.base_degree
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.q).map(Fe)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(0..self.0.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(1..self.0.q))
    }

    pub fn contains(&self, a: Fe) -> bool {
        a.0 < self.0.q
    }

    /// Image of an integer in the prime subfield.
    pub fn from_i64(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn digits(&self, a: Fe) -> Vec<u32> {
        let mut out = vec![0u32; self.0.d];
        let mut v = a.0;
        for o in out.iter_mut() {
            *o = v % self.0.p;
            v /= self.0.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Fe> {
        if digits.len() > self.0.d || digits.iter().any(|&c| c >= self.0.p) {
            return Err(Error::Parse(format!("invalid residues {digits:?}")));
        }
        Ok(Fe(digits.iter().enumerate().map(|(i, &c)| c * self.0.pw[i]).sum()))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        if self.0.d == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= p { s - p } else { s });
        }
        if p == 2 {
            return Fe(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut w) = (a.0, b.0, 0u32, 1u32);
        for _ in 0..self.0.d {
            out += ((x % p + y % p) % p) * w;
            x /= p;
            y /= p;
            w = w.wrapping_mul(p);
        }
        Fe(out)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.0.p;
        if self.0.d == 1 {
            return Fe(if a.0 == 0 { 0 } else { p - a.0 });
        }
        if p == 2 {
            return a;
        }
        let (mut x, mut out, mut w) = (a.0, 0u32, 1u32);
        for _ in 0..self.0.d {
            out += ((p - x % p) % p) * w;
            x /= p;
            w = w.wrapping_mul(p);
        }
        Fe(out)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p as u64;
        if self.0.d == 1 {
            return Fe((a.0 as u64 * b.0 as u64 % p) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let d = self.0.d;
        let mut x = [0u64; MAX_DIGITS];
        let mut y = [0u64; MAX_DIGITS];
        let (mut u, mut v) = (a.0 as u64, b.0 as u64);
        for i in 0..d {
            x[i] = u % p;
            y[i] = v % p;
            u /= p;
            v /= p;
        }
        let mut prod = [0u64; 2 * MAX_DIGITS];
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            for j in 0..d {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        let m = &self.0.modulus;
        for k in (d..2 * d - 1).rev() {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            for i in 0..d {
                prod[k - d + i] = (prod[k - d + i] + c * ((p - m[i] as u64) % p)) % p;
            }
        }
        let mut out = 0u64;
        for i in (0..d).rev() {
            out = out * p + prod[i] % p;
        }
        Fe(out as u32)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut result = Fe::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        result
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv_nz(a))
    }

    /// Inverse of an element known to be nonzero.
    pub(crate) fn inv_nz(&self, a: Fe) -> Fe {
        debug_assert!(!a.is_zero());
        if self.0.d == 1 {
            Fe(inv_mod(a.0, self.0.p))
        } else {
            self.pow(a, self.0.q as u64 - 2)
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^{q_base^j} for the designated base subfield.
    pub fn frobenius(&self, a: Fe, j: usize) -> Fe {
        self.frobenius_with(a, j, self.q_base())
    }

    pub fn frobenius_with(&self, a: Fe, j: usize, q_base: u64) -> Fe {
        let mut x = a;
        for _ in 0..j {
            x = self.pow(x, q_base);
        }
        x
    }

    /// C(n, k) mod p, by Lucas' theorem, as a prime-subfield element.
    pub fn binom(&self, mut n: u64, mut k: u64) -> Fe {
        let p = self.0.p as u64;
        let mut acc = 1u64;
        while k > 0 || n > 0 {
            let (ni, ki) = (n % p, k % p);
            if ki > ni {
                return Fe::ZERO;
            }
            let c = if self.0.fact.is_empty() {
                small_binom(ni, ki, self.0.p) as u64
            } else {
                self.0.fact[ni as usize] as u64 * self.0.inv_fact[ki as usize] as u64 % p
                    * self.0.inv_fact[(ni - ki) as usize] as u64
                    % p
            };
            acc = acc * c % p;
            n /= p;
            k /= p;
        }
        Fe(acc as u32)
    }

    /// Embeds an element of the designated base subfield.
    pub fn embed(&self, c: Fe) -> Fe {
        match &self.0.sub {
            None => c,
            Some(sub) => {
                let mut acc = Fe::ZERO;
                for (i, dig) in sub.base.digits(c).into_iter().enumerate() {
                    acc = self.add(acc, self.mul(Fe(dig), sub.beta[i]));
                }
                acc
            }
        }
    }

    /// Coordinates over the base subfield (little-endian in the fixed basis).
    pub fn coords(&self, x: Fe) -> Vec<Fe> {
        let sub = self.0.sub.as_ref().expect("field has no designated subfield");
        let d = sub.base.degree();
        let s = self.0.d / d;
        let dig = self.digits(x);
        let p = self.0.p as u64;
        let c: Vec<u32> = sub
            .coord
            .iter()
            .map(|row| (row.iter().zip(&dig).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % p) as u32)
            .collect();
        (0..s)
            .map(|j| sub.base.from_digits(&c[j * d..(j + 1) * d]).expect("valid residues"))
            .collect()
    }

    pub fn from_coords(&self, cs: &[Fe]) -> Fe {
        let sub = self.0.sub.as_ref().expect("field has no designated subfield");
        let mut acc = Fe::ZERO;
        for (j, &c) in cs.iter().enumerate() {
            acc = self.add(acc, self.mul(self.embed(c), sub.basis[j]));
        }
        acc
    }

    /// Whether x lies in the designated base subfield.
    pub fn in_subfield(&self, x: Fe) -> bool {
        self.pow(x, self.q_base()) == x
    }

    pub fn format(&self, a: Fe) -> String {
        self.digits(a).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse(&self, text: &str) -> Result<Fe> {
        let digits = text
            .trim()
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        self.from_digits(&digits)
    }
}

fn find_irreducible(p: u32, d: usize, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut m: Vec<u32> = (0..d).map(|_| rng.gen_range(0..p)).collect();
        if m[0] == 0 {
            continue;
        }
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
}

fn invert_fp(mut m: Vec<Vec<u32>>, p: u32) -> Option<Vec<Vec<u32>>> {
    let n = m.len();
    let pp = p as u64;
    let mut inv: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u32).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r][col] != 0)?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let f = inv_mod(m[col][col], p) as u64;
        for j in 0..n {
            m[col][j] = (m[col][j] as u64 * f % pp) as u32;
            inv[col][j] = (inv[col][j] as u64 * f % pp) as u32;
        }
        for r in 0..n {
            if r != col && m[r][col] != 0 {
                let c = m[r][col] as u64;
                for j in 0..n {
                    m[r][j] = ((m[r][j] as u64 + pp - c * m[col][j] as u64 % pp) % pp) as u32;
                    inv[r][j] = ((inv[r][j] as u64 + pp - c * inv[col][j] as u64 % pp) % pp) as u32;
                }
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.size(), 5);
        assert_eq!(f.add(Fe(2), Fe(4)), Fe(1));
        assert_eq!(f.inv(Fe(2)).unwrap(), Fe(3));
        assert!(matches!(f.inv(Fe(0)), Err(Error::DivisionByZero)));
        assert!(matches!(Field::prime(6), Err(Error::NotPrime(6))));
    }

    #[test]
    fn f4_frobenius() {
        let f = Field::new(2, 2, Some(&[1, 1, 1]), 0).unwrap();
        let alpha = f.parse("0,1").unwrap();
        assert_eq!(f.format(f.frobenius_with(alpha, 1, 2)), "1,1");
        assert!(matches!(Field::new(2, 2, Some(&[1, 0, 1]), 0), Err(Error::NotIrreducible(2))));
        assert!(matches!(Field::new(2, 3, Some(&[1, 1, 1]), 0), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn field_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for field in [Field::prime(13).unwrap(), Field::new(3, 4, None, 1).unwrap(), Field::new(2, 6, None, 2).unwrap()] {
            for _ in 0..1000 {
                let (a, b, c) = (field.random(&mut rng), field.random(&mut rng), field.random(&mut rng));
                assert_eq!(field.add(field.add(a, b), c), field.add(a, field.add(b, c)));
                assert_eq!(field.mul(a, field.add(b, c)), field.add(field.mul(a, b), field.mul(a, c)));
                if !a.is_zero() {
                    assert_eq!(field.mul(a, field.inv(a).unwrap()), Fe::ONE);
                }
                let p = field.p() as u64;
                assert_eq!(field.frobenius_with(a, field.degree(), p), a);
                assert_eq!(
                    field.frobenius_with(field.add(a, b), 1, p),
                    field.add(field.frobenius_with(a, 1, p), field.frobenius_with(b, 1, p))
                );
            }
        }
    }

    #[test]
    fn lucas_binomials() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.binom(3, 2), Fe(3));
        assert_eq!(f.binom(5, 1), Fe(0));
        assert_eq!(f.binom(5, 5), Fe(1));
        assert_eq!(f.binom(27, 6), Fe((296010 % 5) as u32));
    }

    #[test]
    fn extension_embedding_and_coords() {
        let base = Field::new(2, 2, Some(&[1, 1, 1]), 0).unwrap();
        let big = Field::extension(&base, 2, 3).unwrap();
        assert_eq!(big.size(), 16);
        assert_eq!(big.q_base(), 4);
        for a in base.elements() {
            for b in base.elements() {
                let ea = big.embed(a);
                assert!(big.in_subfield(ea));
                assert_eq!(big.mul(ea, big.embed(b)), big.embed(base.mul(a, b)));
                assert_eq!(big.add(ea, big.embed(b)), big.embed(base.add(a, b)));
            }
        }
        for x in big.elements() {
            let c = big.coords(x);
            assert_eq!(big.from_coords(&c), x);
        }
    }
}
