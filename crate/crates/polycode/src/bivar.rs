//! Bivariate polynomials, linear-in-Y interpolants and Roth-Ruckenstein root finding.

use crate::error::{Error, Result};
use crate::gf::{Fe, Field};
use crate::unipoly::UniPoly;

/// Q(X, Y) stored as its coefficients in Y: Q = sum_j ys[j](X) Y^j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly {
    field: Field,
    ys: Vec<UniPoly>,
}

impl BiPoly {
    pub fn zero(field: &Field) -> BiPoly {
        BiPoly { field: field.clone(), ys: Vec::new() }
    }

    pub fn from_ycoeffs(field: &Field, mut ys: Vec<UniPoly>) -> BiPoly {
        while ys.last().is_some_and(|p| p.is_zero()) {
            ys.pop();
        }
        BiPoly { field: field.clone(), ys }
    }

    /// From (i, j, c) triples meaning c X^i Y^j; repeated exponents are summed.
    pub fn from_terms(field: &Field, terms: &[(usize, usize, Fe)]) -> BiPoly {
        let dy = terms.iter().map(|t| t.1 + 1).max().unwrap_or(0);
        let mut ys = vec![Vec::<Fe>::new(); dy];
        for &(i, j, c) in terms {
            if ys[j].len() <= i {
                ys[j].resize(i + 1, Fe::ZERO);
            }
            ys[j][i] = field.add(ys[j][i], c);
        }
        BiPoly::from_ycoeffs(field, ys.into_iter().map(|c| UniPoly::new(field, c)).collect())
    }

    /// Y - f(X)
    pub fn y_minus(f: &UniPoly) -> BiPoly {
        BiPoly::from_ycoeffs(f.field(), vec![f.neg(), UniPoly::one(f.field())])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.ys.is_empty()
    }

    pub fn ycoeff(&self, j: usize) -> UniPoly {
        self.ys.get(j).cloned().unwrap_or_else(|| UniPoly::zero(&self.field))
    }

    pub fn ycoeffs(&self) -> &[UniPoly] {
        &self.ys
    }

    /// Nonzero terms as ((i, j), c), ordered by j then i.
    pub fn terms(&self) -> Vec<((usize, usize), Fe)> {
        let mut out = Vec::new();
        for (j, p) in self.ys.iter().enumerate() {
            for (i, &c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.push(((i, j), c));
                }
            }
        }
        out
    }

    pub fn deg_y(&self) -> Option<usize> {
        self.ys.len().checked_sub(1)
    }

    pub fn deg_x(&self) -> Option<usize> {
        self.ys.iter().filter_map(|p| p.degree()).max()
    }

    /// max{i + k j} over nonzero terms.
    pub fn weighted_degree(&self, k: usize) -> Option<usize> {
        self.ys.iter().enumerate().filter_map(|(j, p)| p.degree().map(|d| d + k * j)).max()
    }

    pub fn eval(&self, x: Fe, y: Fe) -> Fe {
        let f = &self.field;
        self.ys.iter().rev().fold(Fe::ZERO, |acc, p| f.add(f.mul(acc, y), p.eval(x)))
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let n = self.ys.len().max(other.ys.len());
        BiPoly::from_ycoeffs(&self.field, (0..n).map(|j| self.ycoeff(j).add(&other.ycoeff(j))).collect())
    }

    pub fn scale(&self, c: Fe) -> BiPoly {
        BiPoly::from_ycoeffs(&self.field, self.ys.iter().map(|p| p.scale(c)).collect())
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() || other.is_zero() {
            return BiPoly::zero(&self.field);
        }
        let mut ys = vec![UniPoly::zero(&self.field); self.ys.len() + other.ys.len() - 1];
        for (i, a) in self.ys.iter().enumerate() {
            for (j, b) in other.ys.iter().enumerate() {
                ys[i + j] = ys[i + j].add(&a.mul(b));
            }
        }
        BiPoly::from_ycoeffs(&self.field, ys)
    }

    /// Coefficient of Z1^u Z2^v in Q(X + Z1, Y + Z2).
    pub fn bihasse(&self, u: usize, v: usize) -> BiPoly {
        let f = &self.field;
        let ys = self
            .ys
            .iter()
            .enumerate()
            .skip(v)
            .map(|(j, p)| p.hasse(u).scale(f.binom(j as u64, v as u64)))
            .collect();
        BiPoly::from_ycoeffs(f, ys)
    }

    /// Q(X, f(X))
    pub fn substitute(&self, f: &UniPoly) -> Result<UniPoly> {
        if f.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self.ys.iter().rev().fold(UniPoly::zero(&self.field), |acc, p| acc.mul(f).add(p)))
    }

    /// Q(X, Y + c)
    pub fn shift_y(&self, c: Fe) -> BiPoly {
        let f = &self.field;
        let n = self.ys.len();
        let mut pw = vec![Fe::ONE; n];
        for i in 1..n {
            pw[i] = f.mul(pw[i - 1], c);
        }
        let ys = (0..n)
            .map(|j| {
                (j..n).fold(UniPoly::zero(f), |acc, i| {
                    let coef = f.mul(f.binom(i as u64, j as u64), pw[i - j]);
                    if coef.is_zero() {
                        acc
                    } else {
                        acc.add(&self.ys[i].scale(coef))
                    }
                })
            })
            .collect();
        BiPoly::from_ycoeffs(f, ys)
    }

    /// Q(X, X^k Y)
    pub fn substitute_xpow_y(&self, k: usize) -> BiPoly {
        BiPoly::from_ycoeffs(&self.field, self.ys.iter().enumerate().map(|(j, p)| p.shl(k * j)).collect())
    }

    fn strip_x(&self) -> BiPoly {
        let m = self
            .ys
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| p.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0))
            .min()
            .unwrap_or(0);
        BiPoly::from_ycoeffs(&self.field, self.ys.iter().map(|p| p.shr(m)).collect())
    }
}

/// Q = A(X) + sum_l B_l(X) Y_l.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinYPoly {
    pub field: Field,
    pub a: UniPoly,
    pub b: Vec<UniPoly>,
}

impl LinYPoly {
    pub fn new(a: UniPoly, b: Vec<UniPoly>) -> LinYPoly {
        LinYPoly { field: a.field().clone(), a, b }
    }

    pub fn num_y(&self) -> usize {
        self.b.len()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.iter().all(|p| p.is_zero())
    }

    pub fn x_degree(&self) -> Option<usize> {
        std::iter::once(&self.a).chain(&self.b).filter_map(|p| p.degree()).max()
    }

    /// max(deg A, max_l deg B_l + k)
    pub fn weighted_degree(&self, k: usize) -> Option<usize> {
        let bs = self.b.iter().filter_map(|p| p.degree().map(|d| d + k));
        self.a.degree().into_iter().chain(bs).max()
    }

    pub fn eval(&self, x: Fe, ys: &[Fe]) -> Fe {
        let f = &self.field;
        self.b.iter().zip(ys).fold(self.a.eval(x), |acc, (p, &y)| f.add(acc, f.mul(p.eval(x), y)))
    }

    /// A + sum_l B_l f^{(l)}
    pub fn substitute(&self, f: &UniPoly) -> Result<UniPoly> {
        if f.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self.b.iter().enumerate().fold(self.a.clone(), |acc, (l, p)| acc.add(&p.mul(&f.hasse(l)))))
    }

    /// tau^{(j)}(Q) = A^{(j)} + sum_l sum_{h<=j} C(h+l, l) B_l^{(j-h)} Y_{l+h}
    pub fn tau_derive(&self, j: usize) -> LinYPoly {
        let f = &self.field;
        let r = self.b.len();
        if r == 0 {
            return LinYPoly::new(self.a.hasse(j), Vec::new());
        }
        let mut b = vec![UniPoly::zero(f); r + j];
        for (l, bl) in self.b.iter().enumerate() {
            for h in 0..=j {
                let c = f.binom((h + l) as u64, l as u64);
                if c.is_zero() {
                    continue;
                }
                b[l + h] = b[l + h].add(&bl.hasse(j - h).scale(c));
            }
        }
        LinYPoly::new(self.a.hasse(j), b)
    }
}

/// All f with deg f < k and Q(X, f(X)) = 0, by Roth-Ruckenstein recursion.
pub fn rr_roots(q: &BiPoly, k: usize) -> Result<Vec<UniPoly>> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = q.field().clone();
    let mut cands = Vec::new();
    let mut prefix = Vec::with_capacity(k);
    rr_rec(q, k, &mut prefix, &mut cands);
    let mut out: Vec<UniPoly> = Vec::new();
    for c in cands {
        let f = UniPoly::new(&field, c);
        if q.substitute(&f)?.is_zero() && !out.contains(&f) {
            out.push(f);
        }
    }
    out.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
    Ok(out)
}

fn rr_rec(q: &BiPoly, k: usize, prefix: &mut Vec<Fe>, out: &mut Vec<Vec<Fe>>) {
    if prefix.len() == k {
        out.push(prefix.clone());
        return;
    }
    let q = q.strip_x();
    let field = q.field().clone();
    let q0 = UniPoly::new(&field, q.ys.iter().map(|p| p.coeff(0)).collect());
    if q0.degree().unwrap_or(0) == 0 {
        return;
    }
    for y0 in field.elements() {
        if !q0.eval(y0).is_zero() {
            continue;
        }
        let next = q.shift_y(y0).substitute_xpow_y(1);
        prefix.push(y0);
        rr_rec(&next, k, prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(f: &Field, c: &[u32]) -> UniPoly {
        UniPoly::new(f, c.iter().map(|&x| Fe(x)).collect())
    }

    #[test]
    fn bihasse_examples() {
        let f = Field::prime(5).unwrap();
        let xy = BiPoly::from_terms(&f, &[(1, 1, Fe(1))]);
        assert_eq!(xy.bihasse(1, 1), BiPoly::from_terms(&f, &[(0, 0, Fe(1))]));
        let x2y = BiPoly::from_terms(&f, &[(2, 1, Fe(1))]);
        assert_eq!(x2y.bihasse(0, 0), x2y);
        let ymx = BiPoly::y_minus(&UniPoly::x(&f));
        let sq = ymx.mul(&ymx);
        for a in f.elements() {
            for (u, v) in [(0, 0), (1, 0), (0, 1)] {
                assert!(sq.bihasse(u, v).eval(a, a).is_zero());
            }
            let weight2 = [(2, 0), (1, 1), (0, 2)].iter().any(|&(u, v)| !sq.bihasse(u, v).eval(a, a).is_zero());
            assert!(weight2);
        }
    }

    #[test]
    fn substitution_examples() {
        let f = Field::prime(7).unwrap();
        let x2 = p(&f, &[0, 0, 1]);
        let q = BiPoly::from_terms(&f, &[(0, 1, Fe(1)), (2, 0, f.neg(Fe(1)))]);
        assert!(q.substitute(&x2).unwrap().is_zero());
        let q1 = LinYPoly::new(UniPoly::zero(&f), vec![UniPoly::zero(&f), UniPoly::one(&f)]);
        assert_eq!(q1.substitute(&x2).unwrap(), p(&f, &[0, 2]));
        let q2 = LinYPoly::new(p(&f, &[0, 0, 4]), vec![UniPoly::one(&f), UniPoly::x(&f)]);
        assert!(q2.substitute(&x2).unwrap().is_zero());
        assert_eq!(q2.weighted_degree(3), Some(4));
    }

    #[test]
    fn tau_chain_identity() {
        let f = Field::prime(13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let b0 = p(&f, &[2, 5, 1]);
        let q = LinYPoly::new(UniPoly::zero(&f), vec![b0.clone()]);
        assert_eq!(q.tau_derive(0), q);
        assert_eq!(q.tau_derive(1), LinYPoly::new(UniPoly::zero(&f), vec![b0.hasse(1), b0.clone()]));
        for _ in 0..100 {
            let r = 1 + (rand::Rng::gen_range(&mut rng, 0..3));
            let q = LinYPoly::new(
                UniPoly::random(&f, 6, &mut rng),
                (0..r).map(|_| UniPoly::random(&f, 5, &mut rng)).collect(),
            );
            let g = UniPoly::random(&f, 7, &mut rng);
            for j in 0..=3 {
                assert_eq!(q.tau_derive(j).substitute(&g).unwrap(), q.substitute(&g).unwrap().hasse(j));
            }
            let q2 = LinYPoly::new(UniPoly::random(&f, 4, &mut rng), (0..r).map(|_| UniPoly::random(&f, 3, &mut rng)).collect());
            let sum = LinYPoly::new(q.a.add(&q2.a), q.b.iter().zip(&q2.b).map(|(x, y)| x.add(y)).collect());
            let lhs = sum.tau_derive(2);
            let (t1, t2) = (q.tau_derive(2), q2.tau_derive(2));
            assert_eq!(lhs.a, t1.a.add(&t2.a));
            for l in 0..lhs.b.len() {
                assert_eq!(lhs.b[l], t1.b[l].add(&t2.b[l]));
            }
        }
    }

    #[test]
    fn rr_examples() {
        let f = Field::prime(5).unwrap();
        let q = BiPoly::y_minus(&p(&f, &[0, 1])).mul(&BiPoly::y_minus(&p(&f, &[0, 2])));
        assert_eq!(rr_roots(&q, 2).unwrap(), vec![p(&f, &[0, 1]), p(&f, &[0, 2])]);
        let q = BiPoly::from_terms(&f, &[(0, 2, Fe(1)), (1, 0, Fe(4))]);
        assert!(rr_roots(&q, 2).unwrap().is_empty());
        assert!(matches!(rr_roots(&BiPoly::zero(&f), 2), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn rr_matches_exhaustive_scan() {
        let f = Field::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let k = 3;
        for _ in 0..20 {
            let roots: Vec<UniPoly> = (0..3).map(|_| UniPoly::random(&f, k, &mut rng)).collect();
            let extra = BiPoly::from_terms(&f, &[(0, 2, Fe(1)), (1, 0, Fe(1))]);
            let q = roots.iter().fold(extra, |acc, r| acc.mul(&BiPoly::y_minus(r)));
            let found = rr_roots(&q, k).unwrap();
            let mut brute = Vec::new();
            for idx in 0..7u32.pow(k as u32) {
                let c: Vec<Fe> = (0..k).map(|i| Fe(idx / 7u32.pow(i as u32) % 7)).collect();
                let g = UniPoly::new(&f, c);
                if q.substitute(&g).unwrap().is_zero() {
                    brute.push(g);
                }
            }
            brute.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
            assert_eq!(found, brute);
            assert!(found.len() <= q.deg_y().unwrap());
        }
    }
}
