//! Bound formulas and combinatorial oracles: Johnson and generalized Singleton,
//! exhaustive list enumeration, agreement hypergraphs, zero patterns, subspace
//! polynomials and the Wronskian intersection bound.

use std::collections::BTreeMap;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::gf::{Fe, Field};
use crate::lattice::PolyLatticeBasis;
use crate::linalg::Matrix;
use crate::mult::MultSpec;
use crate::rs::{DecodeOutcome, PolyCode};
use crate::unipoly::UniPoly;

pub const BRUTE_FORCE_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum BoundKind {
    /// List size at radius alpha for relative distance delta.
    Johnson { delta: Rational64, alpha: Rational64 },
    /// Radius ceiling for list size L at rate R, block length n, alphabet size sigma.
    GenSingleton { list: u64, rate: Rational64, n: u64, alphabet: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    /// Exact rational part: the list size, or L/(L+1)(1-R).
    pub value: Rational64,
    /// log_sigma(L)/n scaled by L/(L+1); zero for Johnson.
    pub correction: f64,
    pub approx: f64,
    /// floor(value) for Johnson; floor(approx n) symbols for the radius bound.
    pub floor: i64,
}

impl BoundReport {
    pub fn format(&self) -> String {
        format!(
            "value={}\ncorrection={:.6}\napprox={:.6}\nfloor={}\n",
            self.value, self.correction, self.approx, self.floor
        )
    }
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn bound_calc(kind: &BoundKind) -> Result<BoundReport> {
    let one = Rational64::from_integer(1);
    let zero = Rational64::from_integer(0);
    match *kind {
        BoundKind::Johnson { delta, alpha } => {
            let den = (one - alpha) * (one - alpha) - (one - delta);
            if alpha <= zero || alpha >= one || delta <= zero || delta > one || den <= zero {
                return Err(Error::RadiusOutOfRange);
            }
            let value = (delta - alpha) / den;
            Ok(BoundReport { value, correction: 0.0, approx: to_f64(value), floor: value.floor().to_integer() })
        }
        BoundKind::GenSingleton { list, rate, n, alphabet } => {
            if list == 0 || n == 0 || alphabet < 2 || rate < zero || rate > one {
                return Err(Error::ParameterViolation(format!(
                    "need L >= 1, n >= 1, alphabet >= 2, 0 <= R <= 1; got L={list}, n={n}, alphabet={alphabet}, R={rate}"
                )));
            }
            let l = list as i64;
            let frac = Rational64::new(l, l + 1);
            let value = frac * (one - rate);
            let correction = to_f64(frac) * (list as f64).ln() / (alphabet as f64).ln() / n as f64;
            let approx = to_f64(value) + correction;
            Ok(BoundReport { value, correction, approx, floor: (approx * n as f64 + 1e-12).floor() as i64 })
        }
    }
}

/// Every message of degree < k with agreement at least t.
pub fn brute_force_list<C: PolyCode>(code: &C, w: &[C::Symbol], t: usize) -> Result<DecodeOutcome<C::Symbol>> {
    brute_force_list_with_cap(code, w, t, BRUTE_FORCE_CAP)
}

pub fn brute_force_list_with_cap<C: PolyCode>(
    code: &C,
    w: &[C::Symbol],
    t: usize,
    cap: usize,
) -> Result<DecodeOutcome<C::Symbol>> {
    if w.len() != code.length() {
        return Err(Error::LengthMismatch(w.len(), code.length()));
    }
    let field = code.message_field().clone();
    let q = field.size() as usize;
    let size = (q as f64).powi(code.k() as i32);
    if size > cap as f64 {
        return Err(Error::TooLarge { size, cap });
    }
    let total = q.pow(code.k() as u32);
    let messages = (0..total).map(|mut idx| {
        let mut c = Vec::with_capacity(code.k());
        for _ in 0..code.k() {
            c.push(Fe((idx % q) as u32));
            idx /= q;
        }
        UniPoly::new(&field, c)
    });
    Ok(DecodeOutcome::from_candidates(code, messages, w, t))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    pub vertices: usize,
    pub edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// sum over edges of max(|e| - 1, 0)
    pub fn weight(&self) -> usize {
        self.edges.iter().map(|e| e.len().saturating_sub(1)).sum()
    }
}

/// Edge i collects the words agreeing with w at position i.
pub fn agreement_hypergraph<S: PartialEq>(words: &[Vec<S>], w: &[S]) -> Result<Hypergraph> {
    if let Some(bad) = words.iter().find(|c| c.len() != w.len()) {
        return Err(Error::LengthMismatch(bad.len(), w.len()));
    }
    let edges = (0..w.len())
        .map(|i| (0..words.len()).filter(|&j| words[j][i] == w[i]).collect())
        .collect();
    Ok(Hypergraph { vertices: words.len(), edges })
}

/// Generic zero pattern: |intersection of Z_j over J| <= k - |J| for every nonempty J.
pub fn gzp_check(sets: &[Vec<usize>], k: usize) -> Result<bool> {
    let kk = sets.len();
    if kk > 20 {
        return Err(Error::TooManySets(kk));
    }
    let mut membership: BTreeMap<usize, usize> = BTreeMap::new();
    for (j, z) in sets.iter().enumerate() {
        for &x in z {
            *membership.entry(x).or_insert(0) |= 1 << j;
        }
    }
    // count[J] = number of elements lying in every Z_j with j in J
    let mut count = vec![0usize; 1 << kk];
    for &mask in membership.values() {
        count[mask] += 1;
    }
    for bit in 0..kk {
        for mask in 0..1usize << kk {
            if mask & (1 << bit) == 0 {
                count[mask] += count[mask | (1 << bit)];
            }
        }
    }
    Ok((1..1usize << kk).all(|j| {
        let size = j.count_ones() as usize;
        size <= k && count[j] <= k - size
    }))
}

fn f2_rank(vs: &[Fe]) -> usize {
    let mut rows: Vec<u32> = vs.iter().map(|v| v.0).collect();
    let mut rank = 0;
    for bit in (0..32).rev() {
        if let Some(pos) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) {
            rows.swap(rank, pos);
            let piv = rows[rank];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && *r >> bit & 1 == 1 {
                    *r ^= piv;
                }
            }
            rank += 1;
        }
    }
    rank
}

/// P_V(X) = prod_{v in V} (X - v) for the F_2-span V of `basis`.
pub fn subspace_poly(field: &Field, basis: &[Fe]) -> Result<UniPoly> {
    if field.characteristic() != 2 || basis.iter().any(|&b| !field.contains(b)) || f2_rank(basis) != basis.len() {
        return Err(Error::NotF2Basis);
    }
    // P_{V + <v>}(X) = P_V(X) (P_V(X) - P_V(v)) since P_V is additive
    let mut p = UniPoly::x(field);
    for &v in basis {
        let pv = p.eval(v);
        p = p.mul(&p.sub(&UniPoly::constant(field, pv)));
    }
    debug_assert!(p.coeffs().iter().enumerate().all(|(i, c)| c.is_zero() || i.is_power_of_two()));
    Ok(p)
}

/// All d-dimensional F_2-subspaces of F_2^m, as bases from reduced echelon matrices.
pub fn enumerate_subspaces(m: usize, d: usize) -> Vec<Vec<Fe>> {
    fn pivots(m: usize, d: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for c in start..m {
            cur.push(c);
            pivots(m, d, c + 1, cur, out);
            cur.pop();
        }
    }
    let mut piv_sets = Vec::new();
    pivots(m, d, 0, &mut Vec::new(), &mut piv_sets);
    let mut out = Vec::new();
    for piv in piv_sets {
        // free positions: (row, col) with col > pivot of row and col not a pivot
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|r| ((piv[r] + 1)..m).filter(|c| !piv.contains(c)).map(move |c| (r, c)))
            .collect();
        for bits in 0u64..1 << free.len() {
            let mut rows: Vec<u32> = piv.iter().map(|&c| 1 << c).collect();
            for (t, &(r, c)) in free.iter().enumerate() {
                if bits >> t & 1 == 1 {
                    rows[r] |= 1 << c;
                }
            }
            out.push(rows.into_iter().map(Fe).collect());
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct LimitationWitness {
    pub field: Field,
    /// Evaluations of the shared polynomial over all field elements in canonical order.
    pub word: Vec<Fe>,
    pub family: Vec<UniPoly>,
    pub subspaces: Vec<Vec<Fe>>,
    pub group_size: usize,
    pub max_degree: usize,
    pub agreements: Vec<usize>,
}

impl LimitationWitness {
    pub fn format(&self) -> String {
        let min_agree = self.agreements.iter().min().copied().unwrap_or(0);
        format!(
            "group_size={}\nmax_degree={}\nmin_agreement={}\nfamily_distinct={}\n",
            self.group_size,
            self.max_degree,
            min_agree,
            distinct_count(&self.family)
        )
    }
}

fn distinct_count(polys: &[UniPoly]) -> usize {
    let set: std::collections::BTreeSet<&[Fe]> = polys.iter().map(|p| p.coeffs()).collect();
    set.len()
}

/// Many degree-<= 2^t polynomials agreeing with one word on 2^d points each.
pub fn limitation_witness(m: usize, d: usize, t: usize) -> Result<LimitationWitness> {
    if !(1 <= t && t < d && d <= m && m <= 8) {
        return Err(Error::DimensionOutOfRange(format!("need 1 <= t < d <= m <= 8, got m={m}, d={d}, t={t}")));
    }
    let field = Field::new(2, m, None, 0)?;
    let mut groups: BTreeMap<Vec<Fe>, Vec<(Vec<Fe>, UniPoly)>> = BTreeMap::new();
    for basis in enumerate_subspaces(m, d) {
        let p = subspace_poly(&field, &basis)?;
        let key: Vec<Fe> = ((t + 1)..d).map(|i| p.coeff(1 << i)).collect();
        groups.entry(key).or_default().push((basis, p));
    }
    let (key, members) = groups
        .into_iter()
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| b.0.cmp(&a.0)))
        .expect("at least one subspace");
    let mut shared = UniPoly::monomial(&field, Fe::ONE, 1 << d);
    for (i, &b) in ((t + 1)..d).zip(&key) {
        shared = shared.add(&UniPoly::monomial(&field, b, 1 << i));
    }
    let word: Vec<Fe> = field.elements().map(|x| shared.eval(x)).collect();
    let mut family = Vec::with_capacity(members.len());
    let mut subspaces = Vec::with_capacity(members.len());
    let mut agreements = Vec::with_capacity(members.len());
    for (basis, p) in members {
        let g = shared.sub(&p);
        agreements.push(field.elements().zip(&word).filter(|(x, &y)| g.eval(*x) == y).count());
        family.push(g);
        subspaces.push(basis);
    }
    let max_degree = family.iter().filter_map(|g| g.degree()).max().unwrap_or(0);
    Ok(LimitationWitness { group_size: family.len(), field, word, family, subspaces, max_degree, agreements })
}

#[derive(Clone, Debug)]
pub struct WronskianReport {
    pub determinant: UniPoly,
    /// dim(A_i intersect V) per evaluation point.
    pub dims: Vec<usize>,
    pub total: usize,
    /// r k / (s - r + 1)
    pub bound: f64,
    pub holds: bool,
}

impl WronskianReport {
    pub fn format(&self) -> String {
        format!(
            "det_degree={}\ntotal={}\nbound={:.6}\nholds={}\n",
            self.determinant.degree_i64(),
            self.total,
            self.bound,
            self.holds
        )
    }
}

/// Wronskian of Hasse derivatives and the per-point intersection dimensions of V = span(f).
pub fn wronskian_bound_check(spec: &MultSpec, polys: &[UniPoly]) -> Result<WronskianReport> {
    let f = &spec.field;
    let r = polys.len();
    if r == 0 || r > spec.s || polys.iter().any(|p| p.len() > spec.k) {
        return Err(Error::ParameterViolation(format!("need 1 <= r <= s and deg < k, got r={r}")));
    }
    let coeff_rows: Vec<Vec<Fe>> = polys.iter().map(|p| p.padded(spec.k)).collect();
    if Matrix::from_rows(f, &coeff_rows)?.rank() < r {
        return Err(Error::LinearlyDependent);
    }
    let cols: Vec<Vec<UniPoly>> = polys.iter().map(|p| (0..r).map(|i| p.hasse(i)).collect()).collect();
    let determinant = PolyLatticeBasis::new(f, cols)?.determinant();
    if determinant.is_zero() {
        return Err(Error::LinearlyDependent);
    }
    let dims: Vec<usize> = spec
        .points
        .iter()
        .map(|&a| {
            let blocks: Vec<Vec<Fe>> = polys.iter().map(|p| p.hasse_block(a, spec.s)).collect();
            let mut m = Matrix::zeros(f, spec.s, r);
            for (j, b) in blocks.iter().enumerate() {
                for (i, &x) in b.iter().enumerate() {
                    m.set(i, j, x);
                }
            }
            m.nullspace().len()
        })
        .collect();
    let total = dims.iter().sum();
    let bound = (r * spec.k) as f64 / (spec.s + 1 - r) as f64;
    Ok(WronskianReport { determinant, dims, total, bound, holds: total as f64 <= bound + 1e-12 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rs::RsSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn johnson_examples() {
        let rep = bound_calc(&BoundKind::Johnson { delta: r(3, 4), alpha: r(2, 5) }).unwrap();
        assert_eq!(rep.value, r(35, 11));
        assert_eq!(rep.floor, 3);
        assert!(matches!(bound_calc(&BoundKind::Johnson { delta: r(3, 4), alpha: r(1, 2) }), Err(Error::RadiusOutOfRange)));
        let s = bound_calc(&BoundKind::GenSingleton { list: 1, rate: r(1, 2), n: 4, alphabet: 5 }).unwrap();
        assert_eq!(s.value, r(1, 4));
        assert_eq!(s.correction, 0.0);
    }

    #[test]
    fn brute_force_extremes() {
        let f5 = Field::prime(5).unwrap();
        let spec = RsSpec::with_first_points(&f5, 4, 2).unwrap();
        let w = vec![Fe(1), Fe(2), Fe(3), Fe(0)];
        assert_eq!(brute_force_list(&spec, &w, 0).unwrap().len(), 25);
        assert!(brute_force_list(&spec, &w, 4).unwrap().len() <= 1);
        let cw = spec.encode(&UniPoly::new(&f5, vec![Fe(1), Fe(1)])).unwrap();
        assert_eq!(brute_force_list(&spec, &cw, 4).unwrap().len(), 1);
        assert!(matches!(brute_force_list_with_cap(&spec, &w, 0, 10), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn hypergraph_examples() {
        let w = vec![1, 2, 3];
        let h = agreement_hypergraph(&[w.clone(), w.clone()], &w).unwrap();
        assert_eq!(h.weight(), 3);
        assert!(agreement_hypergraph(&[vec![1]], &w).is_err());
    }

    #[test]
    fn gzp_examples() {
        assert!(gzp_check(&[vec![], vec![], vec![]], 3).unwrap());
        assert!(!gzp_check(&[vec![1]], 1).unwrap());
        assert!(gzp_check(&[vec![0, 1], vec![2, 3], vec![0, 2]], 3).unwrap());
        assert!(!gzp_check(&[vec![0, 1], vec![0, 1], vec![]], 3).unwrap());
        assert!(matches!(gzp_check(&vec![vec![]; 21], 21), Err(Error::TooManySets(21))));
    }

    #[test]
    fn subspace_poly_small() {
        let f4 = Field::new(2, 2, None, 0).unwrap();
        let p = subspace_poly(&f4, &[Fe::ONE]).unwrap();
        assert_eq!(p.coeffs(), &[Fe::ZERO, Fe::ONE, Fe::ONE]);
        assert_eq!(subspace_poly(&f4, &[]).unwrap(), UniPoly::x(&f4));
        assert!(matches!(subspace_poly(&f4, &[Fe(2), Fe(2)]), Err(Error::NotF2Basis)));
        assert_eq!(enumerate_subspaces(4, 2).len(), 35);
        assert_eq!(enumerate_subspaces(6, 3).len(), 1395);
    }

    #[test]
    fn witness_boundary() {
        let w = limitation_witness(4, 2, 1).unwrap();
        assert_eq!(w.group_size, 35);
        assert!(w.max_degree <= 2);
        assert!(w.agreements.iter().all(|&a| a == 4));
        assert!(limitation_witness(4, 2, 2).is_err());
    }

    #[test]
    fn wronskian_examples() {
        let f7 = Field::prime(7).unwrap();
        let spec = MultSpec::with_first_points(&f7, 7, 4, 2).unwrap();
        let rep = wronskian_bound_check(&spec, &[UniPoly::one(&f7), UniPoly::x(&f7)]).unwrap();
        assert_eq!(rep.determinant, UniPoly::one(&f7));
        let rep = wronskian_bound_check(&spec, &[UniPoly::constant(&f7, Fe(3))]).unwrap();
        assert!(rep.dims.iter().all(|&d| d == 0));
        assert!(matches!(
            wronskian_bound_check(&spec, &[UniPoly::x(&f7), UniPoly::x(&f7).scale(Fe(2))]),
            Err(Error::LinearlyDependent)
        ));
        let f11 = Field::prime(11).unwrap();
        let spec = MultSpec::with_first_points(&f11, 11, 5, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = UniPoly::random(&f11, 5, &mut rng);
            let b = UniPoly::random(&f11, 5, &mut rng);
            if let Ok(rep) = wronskian_bound_check(&spec, &[a, b]) {
                assert!(rep.holds);
            }
        }
    }
}
