//! Reed-Muller codes: multivariate polynomials, line restrictions, local
//! correction and local list decoding.

use std::cell::Cell;
use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{Fe, Field};
use crate::rs::RsSpec;
use crate::unipoly::{Multiplicity, UniPoly};
use crate::util::stream_rng;

/// Work cap for assembling Johnson-variant advice.
pub const ADVICE_CAP: usize = 1_000_000;

/// All exponent vectors of length m and weight below s, ordered by (weight, lex).
pub fn multi_indices(m: usize, s: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(m, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for w in 0..s {
        let mut level = Vec::new();
        rec(m, w, &mut Vec::new(), &mut level);
        level.sort();
        out.extend(level);
    }
    out
}

fn binom_usize(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    field: Field,
    m: usize,
    terms: BTreeMap<Vec<usize>, Fe>,
}

impl MultiPoly {
    pub fn new<I: IntoIterator<Item = (Vec<usize>, Fe)>>(field: &Field, m: usize, terms: I) -> Result<MultiPoly> {
        let mut map: BTreeMap<Vec<usize>, Fe> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != m {
                return Err(Error::DimensionMismatch(format!("exponent {e:?} in {m} variables")));
            }
            let slot = map.entry(e).or_insert(Fe::ZERO);
            *slot = field.add(*slot, c);
        }
        map.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { field: field.clone(), m, terms: map })
    }

    pub fn zero(field: &Field, m: usize) -> MultiPoly {
        MultiPoly { field: field.clone(), m, terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, m: usize, c: Fe) -> MultiPoly {
        MultiPoly::new(field, m, [(vec![0; m], c)]).expect("arity matches")
    }

    /// X_j (0-based).
    pub fn variable(field: &Field, m: usize, j: usize) -> MultiPoly {
        let mut e = vec![0; m];
        e[j] = 1;
        MultiPoly::new(field, m, [(e, Fe::ONE)]).expect("arity matches")
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, m: usize, k: usize, rng: &mut R) -> MultiPoly {
        let terms: Vec<_> = multi_indices(m, k).into_iter().map(|e| (e, field.random(rng))).collect();
        MultiPoly::new(field, m, terms).expect("arity matches")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, Fe)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let all = self.terms().chain(other.terms()).map(|(e, c)| (e.clone(), c));
        MultiPoly::new(&self.field, self.m, all.collect::<Vec<_>>()).expect("arity matches")
    }

    pub fn scale(&self, c: Fe) -> MultiPoly {
        let terms = self.terms().map(|(e, x)| (e.clone(), self.field.mul(c, x)));
        MultiPoly::new(&self.field, self.m, terms.collect::<Vec<_>>()).expect("arity matches")
    }

    pub fn eval(&self, x: &[Fe]) -> Fe {
        let f = &self.field;
        self.terms.iter().fold(Fe::ZERO, |acc, (e, &c)| {
            let mono = e.iter().zip(x).fold(c, |m, (&ej, &xj)| f.mul(m, f.pow(xj, ej as u64)));
            f.add(acc, mono)
        })
    }

    /// Hasse derivative f^{(i)}.
    pub fn hasse(&self, i: &[usize]) -> MultiPoly {
        let f = &self.field;
        let terms: Vec<_> = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().zip(i).all(|(a, b)| a >= b))
            .map(|(e, &c)| {
                let coef = e.iter().zip(i).fold(c, |acc, (&a, &b)| f.mul(acc, f.binom(a as u64, b as u64)));
                (e.iter().zip(i).map(|(a, b)| a - b).collect(), coef)
            })
            .collect();
        MultiPoly::new(f, self.m, terms).expect("arity matches")
    }

    /// f^{(<s)}(a), indexed by `multi_indices(m, s)`.
    pub fn derivative_block(&self, a: &[Fe], s: usize) -> Vec<Fe> {
        multi_indices(self.m, s).iter().map(|i| self.hasse(i).eval(a)).collect()
    }

    pub fn multiplicity_at(&self, a: &[Fe]) -> Multiplicity {
        let Some(deg) = self.total_degree() else {
            return Multiplicity::Infinite;
        };
        let idx = multi_indices(self.m, deg + 1);
        let first = idx.iter().find(|i| !self.hasse(i).eval(a).is_zero());
        Multiplicity::Finite(first.map_or(deg + 1, |i| i.iter().sum()))
    }

    /// f(a + T u) as a univariate in T.
    pub fn restrict(&self, a: &[Fe], u: &[Fe]) -> Result<UniPoly> {
        if u.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroDirection);
        }
        let f = &self.field;
        let maxdeg = self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0);
        let lin_pows: Vec<Vec<UniPoly>> = (0..self.m)
            .map(|j| {
                let lin = UniPoly::new(f, vec![a[j], u[j]]);
                let mut pw = vec![UniPoly::one(f)];
                for e in 1..=maxdeg {
                    pw.push(pw[e - 1].mul(&lin));
                }
                pw
            })
            .collect();
        let mut acc = UniPoly::zero(f);
        for (e, &c) in &self.terms {
            let mut t = UniPoly::constant(f, c);
            for (j, &ej) in e.iter().enumerate() {
                t = t.mul(&lin_pows[j][ej]);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// One term per line: `e_1 ... e_m : coefficient`.
    pub fn format(&self) -> String {
        self.terms
            .iter()
            .map(|(e, &c)| {
                let ex: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                format!("{} : {}\n", ex.join(" "), self.field.format(c))
            })
            .collect()
    }

    pub fn parse(field: &Field, m: usize, text: &str) -> Result<MultiPoly> {
        let mut terms = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (ex, c) = line.split_once(':').ok_or_else(|| Error::Parse(format!("missing ':' in {line:?}")))?;
            let e = ex
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|err| Error::Parse(format!("{t:?}: {err}"))))
                .collect::<Result<Vec<_>>>()?;
            terms.push((e, field.parse(c)?));
        }
        MultiPoly::new(field, m, terms)
    }
}

/// v|_u: the order-i entries sum_{wt(i)=i} v_i u^i for i < s.
pub fn restrict_block(field: &Field, v: &[Fe], u: &[Fe], s: usize) -> Vec<Fe> {
    let mut out = vec![Fe::ZERO; s];
    for (idx, &vi) in multi_indices(u.len(), s).iter().zip(v) {
        let mono = idx.iter().zip(u).fold(vi, |acc, (&e, &x)| field.mul(acc, field.pow(x, e as u64)));
        let w: usize = idx.iter().sum();
        out[w] = field.add(out[w], mono);
    }
    out
}

#[derive(Clone, Debug)]
pub struct RmSpec {
    pub field: Field,
    pub m: usize,
    pub k: usize,
    line_code: RsSpec,
}

impl RmSpec {
    pub fn new(field: &Field, m: usize, k: usize) -> Result<RmSpec> {
        let q = field.size();
        if m == 0 || k == 0 || k >= q as usize {
            return Err(Error::ParameterViolation(format!("need m >= 1 and 1 <= k < q, got m={m}, k={k}, q={q}")));
        }
        let line_code = RsSpec::new(field, field.elements().collect(), k)?;
        Ok(RmSpec { field: field.clone(), m, k, line_code })
    }

    pub fn q(&self) -> usize {
        self.field.size() as usize
    }

    pub fn length(&self) -> usize {
        self.q().pow(self.m as u32)
    }

    pub fn dimension(&self) -> usize {
        binom_usize(self.m + self.k - 1, self.m)
    }

    /// delta = 1 - k/q.
    pub fn delta(&self) -> f64 {
        1.0 - self.k as f64 / self.q() as f64
    }

    /// The RS code on a line, evaluated at T in canonical element order.
    pub fn line_code(&self) -> &RsSpec {
        &self.line_code
    }

    /// Point with the given lexicographic index (first coordinate most significant).
    pub fn point(&self, mut index: usize) -> Vec<Fe> {
        let q = self.q();
        let mut p = vec![Fe::ZERO; self.m];
        for slot in p.iter_mut().rev() {
            *slot = Fe((index % q) as u32);
            index /= q;
        }
        p
    }

    pub fn index_of(&self, p: &[Fe]) -> usize {
        p.iter().fold(0, |acc, x| acc * self.q() + x.0 as usize)
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<Fe>> + '_ {
        (0..self.length()).map(|i| self.point(i))
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Fe> {
        (0..self.m).map(|_| self.field.random(rng)).collect()
    }

    pub fn encode(&self, f: &MultiPoly) -> Result<Vec<Fe>> {
        self.check_message(f)?;
        Ok(self.points().map(|p| f.eval(&p)).collect())
    }

    pub fn check_message(&self, f: &MultiPoly) -> Result<()> {
        if f.arity() != self.m {
            return Err(Error::DimensionMismatch(format!("{} variables, code has {}", f.arity(), self.m)));
        }
        if f.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        match f.total_degree() {
            Some(d) if d >= self.k => Err(Error::DegreeTooLarge { degree: d, bound: self.k }),
            _ => Ok(()),
        }
    }

    /// a + T u for T in canonical element order.
    pub fn line(&self, a: &[Fe], u: &[Fe]) -> Vec<Vec<Fe>> {
        let f = &self.field;
        f.elements()
            .map(|t| a.iter().zip(u).map(|(&x, &y)| f.add(x, f.mul(t, y))).collect())
            .collect()
    }

    /// Agreement threshold for list decoding a line at radius 1 - sqrt(factor (1 - delta)).
    pub fn line_list_threshold(&self, factor: f64) -> usize {
        let q = self.q();
        let exact = (factor * (self.k * q) as f64).sqrt();
        let t = (exact - 1e-9).ceil().max(0.0) as usize;
        t.max(self.line_code.gs_threshold()).min(q)
    }
}

/// Symbolic line restriction.
pub fn line_restrict(f: &MultiPoly, a: &[Fe], u: &[Fe]) -> Result<UniPoly> {
    f.restrict(a, u)
}

/// The q sampled values of a word on the line a + T u.
pub fn line_values(spec: &RmSpec, oracle: &WordOracle, a: &[Fe], u: &[Fe]) -> Result<Vec<Fe>> {
    if u.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroDirection);
    }
    Ok(spec.line(a, u).iter().map(|p| oracle.query(p)).collect())
}

pub trait WordSource {
    fn value(&self, x: &[Fe]) -> Fe;
}

/// A fully materialized word in point-major lexicographic order.
pub struct TableWord {
    q: usize,
    table: Vec<Fe>,
}

impl TableWord {
    pub fn new(spec: &RmSpec, table: Vec<Fe>) -> Result<TableWord> {
        if table.len() != spec.length() {
            return Err(Error::LengthMismatch(table.len(), spec.length()));
        }
        Ok(TableWord { q: spec.q(), table })
    }
}

impl WordSource for TableWord {
    fn value(&self, x: &[Fe]) -> Fe {
        self.table[x.iter().fold(0, |acc, v| acc * self.q + v.0 as usize)]
    }
}

#[derive(Clone, Debug)]
pub enum Corruption {
    /// Each point independently with probability rho.
    Random(f64),
    /// Exactly these points.
    Points(Vec<Vec<Fe>>),
    /// Every point on the line a + T u except a itself.
    Line { a: Vec<Fe>, u: Vec<Fe> },
}

/// A planted codeword plus a sparse table of corrupted points, generated on demand.
#[derive(Clone, Debug)]
pub struct PlantedWord {
    pub poly: MultiPoly,
    errors: HashMap<Vec<Fe>, Fe>,
}

impl PlantedWord {
    pub fn new<R: Rng + ?Sized>(spec: &RmSpec, poly: MultiPoly, model: &Corruption, rng: &mut R) -> Result<PlantedWord> {
        spec.check_message(&poly)?;
        let targets: Vec<Vec<Fe>> = match model {
            Corruption::Random(rho) => {
                if !(0.0..=1.0).contains(rho) {
                    return Err(Error::ParameterViolation(format!("rate {rho} outside [0, 1]")));
                }
                spec.points().filter(|_| rng.gen::<f64>() < *rho).collect()
            }
            Corruption::Points(ps) => ps.clone(),
            Corruption::Line { a, u } => spec.line(a, u).into_iter().filter(|p| p != a).collect(),
        };
        let f = &spec.field;
        let mut errors = HashMap::new();
        for p in targets {
            if p.len() != spec.m || p.iter().any(|&x| !f.contains(x)) {
                return Err(Error::BadPositions(format!("{p:?}")));
            }
            let good = poly.eval(&p);
            let bad = f.add(good, f.random_nonzero(rng));
            errors.insert(p, bad);
        }
        Ok(PlantedWord { poly, errors })
    }

    pub fn corrupted(&self) -> usize {
        self.errors.len()
    }

    pub fn is_corrupted(&self, p: &[Fe]) -> bool {
        self.errors.contains_key(p)
    }
}

impl WordSource for PlantedWord {
    fn value(&self, x: &[Fe]) -> Fe {
        self.errors.get(x).copied().unwrap_or_else(|| self.poly.eval(x))
    }
}

/// Query access to a word with a counter of issued queries.
pub struct WordOracle<'a> {
    source: &'a dyn WordSource,
    count: Cell<usize>,
}

impl<'a> WordOracle<'a> {
    pub fn new(source: &'a dyn WordSource) -> WordOracle<'a> {
        WordOracle { source, count: Cell::new(0) }
    }

    pub fn query(&self, x: &[Fe]) -> Fe {
        self.count.set(self.count.get() + 1);
        self.source.value(x)
    }

    pub fn queries(&self) -> usize {
        self.count.get()
    }

    pub fn reset(&self) {
        self.count.set(0);
    }
}

fn random_other<R: Rng + ?Sized>(spec: &RmSpec, a: &[Fe], rng: &mut R) -> Vec<Fe> {
    loop {
        let b = spec.random_point(rng);
        if b != a {
            return b;
        }
    }
}

fn direction(spec: &RmSpec, from: &[Fe], to: &[Fe]) -> Vec<Fe> {
    from.iter().zip(to).map(|(&x, &y)| spec.field.sub(y, x)).collect()
}

/// Local correction: decode w on a random line through a and return g(0).
pub fn rm_local_correct(spec: &RmSpec, oracle: &WordOracle, a: &[Fe], seed: u64) -> Option<Fe> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = random_other(spec, a, &mut rng);
    let vals = line_values(spec, oracle, a, &direction(spec, a, &b)).ok()?;
    let out = spec.line_code.unique_decode(&vals);
    out.entries.first().map(|e| e.message.eval(Fe::ZERO))
}

#[derive(Clone, Debug, PartialEq)]
pub enum AdviceKind {
    /// Guess for f(b); lines decoded at radius 1 - sqrt(sigma (1 - delta)).
    Basic { sigma: f64 },
    /// Guess for f^{(<s)}(b); lines decoded at radius 1 - sqrt((1 + gamma)(1 - delta)).
    Johnson { s: usize, gamma: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalAdvice {
    pub anchor: Vec<Fe>,
    pub guess: Vec<Fe>,
    pub kind: AdviceKind,
    pub xi: f64,
}

impl LocalAdvice {
    fn factor(&self) -> f64 {
        match self.kind {
            AdviceKind::Basic { sigma } => sigma,
            AdviceKind::Johnson { gamma, .. } => 1.0 + gamma,
        }
    }

    /// Radius 1 - sqrt(factor (1 - delta)) - xi the advice is meant for.
    pub fn radius(&self, spec: &RmSpec) -> f64 {
        1.0 - (self.factor() * (1.0 - spec.delta())).sqrt() - self.xi
    }
}

/// The basic list: one advice (b, v) per v in F_q, sharing a random anchor b.
pub fn rm_local_list(spec: &RmSpec, sigma: f64, xi: f64, seed: u64) -> Result<Vec<LocalAdvice>> {
    if sigma <= 1.0 {
        return Err(Error::ParameterViolation(format!("blowup {sigma} must exceed 1")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = spec.random_point(&mut rng);
    Ok(spec
        .field
        .elements()
        .map(|v| LocalAdvice { anchor: b.clone(), guess: vec![v], kind: AdviceKind::Basic { sigma }, xi })
        .collect())
}

/// A_{b,v}(a): list decode the line through a and b, keep the unique candidate consistent
/// with the advice at T = 1 and return its value at T = 0.
pub fn run_local_algorithm(spec: &RmSpec, oracle: &WordOracle, advice: &LocalAdvice, a: &[Fe]) -> Option<Fe> {
    let u = direction(spec, a, &advice.anchor);
    let vals = line_values(spec, oracle, a, &u).ok()?;
    let t = spec.line_list_threshold(advice.factor());
    let list = spec.line_code.gs_decode_at(&vals, t, None).ok()?;
    let f = &spec.field;
    let target = match advice.kind {
        AdviceKind::Basic { .. } => advice.guess.clone(),
        AdviceKind::Johnson { s, .. } => restrict_block(f, &advice.guess, &u, s),
    };
    let mut hits = list.entries.iter().filter(|e| e.message.hasse_block(Fe::ONE, target.len()) == target);
    let g = hits.next()?;
    if hits.next().is_some() {
        return None;
    }
    Some(g.message.eval(Fe::ZERO))
}

/// Size of the direction grid U for the Johnson variant: ceil(8 delta s / (gamma (1 - delta))).
pub fn johnson_grid(spec: &RmSpec, s: usize, gamma: f64) -> usize {
    let num = 8.0 * (spec.q() - spec.k) as f64 * s as f64;
    let den = gamma * spec.k as f64;
    (num / den - 1e-9).ceil() as usize
}

/// Johnson-variant advice: decode r^m lines through a random anchor b and keep every
/// derivative block consistent with at least half of them.
pub fn rm_local_list_johnson(
    spec: &RmSpec,
    oracle: &WordOracle,
    s: usize,
    gamma: f64,
    xi: f64,
    seed: u64,
) -> Result<Vec<LocalAdvice>> {
    if s == 0 || gamma <= 0.0 {
        return Err(Error::ParameterViolation(format!("need s >= 1 and gamma > 0, got s={s}, gamma={gamma}")));
    }
    let r = johnson_grid(spec, s, gamma);
    if r == 0 || r > spec.q() {
        return Err(Error::ParameterViolation(format!("direction grid size {r} exceeds q={}", spec.q())));
    }
    let f = &spec.field;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = spec.random_point(&mut rng);
    let u0 = spec.random_point(&mut rng);
    let t = spec.line_list_threshold(1.0 + gamma);
    let mut dirs = Vec::new();
    let mut lists: Vec<Vec<Vec<Fe>>> = Vec::new();
    for idx in 0..r.pow(spec.m as u32) {
        let mut u = vec![Fe::ZERO; spec.m];
        let mut rest = idx;
        for slot in u.iter_mut().rev() {
            *slot = Fe((rest % r) as u32);
            rest /= r;
        }
        let dir: Vec<Fe> = u0.iter().zip(&u).map(|(&x, &y)| f.add(x, y)).collect();
        let vals: Vec<Fe> = spec.line(&b, &dir).iter().map(|p| oracle.query(p)).collect();
        let blocks = match spec.line_code.gs_decode_at(&vals, t, None) {
            Ok(out) => out.entries.iter().map(|e| e.message.hasse_block(Fe::ZERO, s)).collect(),
            Err(_) => Vec::new(),
        };
        dirs.push(dir);
        lists.push(blocks);
    }
    let need = dirs.len().div_ceil(2);
    let indices = multi_indices(spec.m, s);
    let q = spec.q();
    let mut cands: Vec<Vec<Fe>> = vec![Vec::new()];
    for order in 0..s {
        let width = indices.iter().filter(|i| i.iter().sum::<usize>() == order).count();
        let comps = (q as f64).powi(width as i32);
        let work = comps * cands.len() as f64;
        if work > ADVICE_CAP as f64 {
            return Err(Error::AdviceSpaceTooLarge(work.min(usize::MAX as f64) as usize));
        }
        let mut next = Vec::new();
        for prefix in &cands {
            for c in 0..comps as usize {
                let mut v = prefix.clone();
                let mut rest = c;
                for _ in 0..width {
                    v.push(Fe((rest % q) as u32));
                    rest /= q;
                }
                let hits = dirs
                    .iter()
                    .zip(&lists)
                    .filter(|(d, l)| {
                        let res = restrict_block(f, &v, d, order + 1);
                        l.iter().any(|g| g[..=order] == res[..])
                    })
                    .count();
                if hits >= need {
                    next.push(v);
                }
            }
        }
        cands = next;
    }
    Ok(cands
        .into_iter()
        .map(|v| LocalAdvice { anchor: b.clone(), guess: v, kind: AdviceKind::Johnson { s, gamma }, xi })
        .collect())
}

/// A word whose symbol at x is the output of a local algorithm (bottom maps to 0).
pub struct LocalAlgorithmWord<'a> {
    spec: &'a RmSpec,
    inner: &'a WordOracle<'a>,
    advice: &'a LocalAdvice,
}

impl<'a> LocalAlgorithmWord<'a> {
    pub fn new(spec: &'a RmSpec, inner: &'a WordOracle<'a>, advice: &'a LocalAdvice) -> Self {
        LocalAlgorithmWord { spec, inner, advice }
    }
}

impl WordSource for LocalAlgorithmWord<'_> {
    fn value(&self, x: &[Fe]) -> Fe {
        run_local_algorithm(self.spec, self.inner, self.advice, x).unwrap_or(Fe::ZERO)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DecoderKind {
    LocalCorrect,
    LocalList { sigma: f64, xi: f64 },
    /// Local list decoding followed by local correction over the advice's outputs.
    Composed { sigma: f64, xi: f64 },
}

#[derive(Clone, Debug, Default)]
pub struct LocalStats {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Point index mapped to (successes, trials).
    pub per_point: BTreeMap<usize, (usize, usize)>,
    /// Fraction of trials whose advice list contained the true advice.
    pub advice_hit_rate: f64,
    pub mean_queries: f64,
    pub max_queries: usize,
}

/// Monte-Carlo success statistics; trial i draws its point and decoder seed from stream i.
pub fn estimate_local_success(
    spec: &RmSpec,
    poly: &MultiPoly,
    kind: &DecoderKind,
    model: &Corruption,
    trials: usize,
    seed: u64,
) -> Result<LocalStats> {
    if trials == 0 {
        return Err(Error::ParameterViolation("need at least one trial".into()));
    }
    let mut rng = stream_rng(seed, u64::MAX);
    let word = PlantedWord::new(spec, poly.clone(), model, &mut rng)?;
    let mut stats = LocalStats { trials, ..LocalStats::default() };
    let mut hits = 0usize;
    let mut total_queries = 0usize;
    for trial in 0..trials {
        let mut trng = stream_rng(seed, trial as u64);
        let a = spec.random_point(&mut trng);
        let dseed: u64 = trng.gen();
        let oracle = WordOracle::new(&word);
        let (out, queries) = match kind {
            DecoderKind::LocalCorrect => (rm_local_correct(spec, &oracle, &a, dseed), oracle.queries()),
            DecoderKind::LocalList { sigma, xi } | DecoderKind::Composed { sigma, xi } => {
                let list = rm_local_list(spec, *sigma, *xi, dseed)?;
                let truth = poly.eval(&list[0].anchor);
                let Some(advice) = list.iter().find(|ad| ad.guess == [truth]) else {
                    continue;
                };
                hits += 1;
                if let DecoderKind::Composed { .. } = kind {
                    let inner_word = LocalAlgorithmWord::new(spec, &oracle, advice);
                    let outer = WordOracle::new(&inner_word);
                    (rm_local_correct(spec, &outer, &a, trng.gen()), oracle.queries())
                } else {
                    (run_local_algorithm(spec, &oracle, advice, &a), oracle.queries())
                }
            }
        };
        let ok = out == Some(poly.eval(&a));
        stats.successes += ok as usize;
        let slot = stats.per_point.entry(spec.index_of(&a)).or_insert((0, 0));
        slot.0 += ok as usize;
        slot.1 += 1;
        total_queries += queries;
        stats.max_queries = stats.max_queries.max(queries);
    }
    stats.success_rate = stats.successes as f64 / trials as f64;
    stats.advice_hit_rate = match kind {
        DecoderKind::LocalCorrect => 1.0,
        _ => hits as f64 / trials as f64,
    };
    stats.mean_queries = total_queries as f64 / trials as f64;
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(xs: &[u32]) -> Vec<Fe> {
        xs.iter().map(|&x| Fe(x)).collect()
    }

    #[test]
    fn encode_examples() {
        let f5 = Field::prime(5).unwrap();
        let spec = RmSpec::new(&f5, 2, 3).unwrap();
        assert_eq!(spec.dimension(), 6);
        let x1 = MultiPoly::variable(&f5, 2, 0);
        let table = spec.encode(&x1).unwrap();
        for (i, v) in table.iter().enumerate() {
            assert_eq!(*v, spec.point(i)[0]);
        }
        let c = spec.encode(&MultiPoly::constant(&f5, 2, Fe(3))).unwrap();
        assert!(c.iter().all(|&v| v == Fe(3)));
        let big = MultiPoly::new(&f5, 2, [(vec![2, 1], Fe::ONE)]).unwrap();
        assert!(matches!(spec.encode(&big), Err(Error::DegreeTooLarge { .. })));
    }

    #[test]
    fn schwartz_zippel_zero_fraction() {
        let f11 = Field::prime(11).unwrap();
        let spec = RmSpec::new(&f11, 2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let f = MultiPoly::random(&f11, 2, 4, &mut rng);
            if f.is_zero() {
                continue;
            }
            let zeros = spec.encode(&f).unwrap().iter().filter(|v| v.is_zero()).count();
            assert!(zeros <= 3 * 11);
        }
    }

    #[test]
    fn restriction_examples() {
        let f7 = Field::prime(7).unwrap();
        let xy = MultiPoly::new(&f7, 2, [(vec![1, 1], Fe::ONE)]).unwrap();
        let r = line_restrict(&xy, &pt(&[0, 0]), &pt(&[1, 1])).unwrap();
        assert_eq!(r, UniPoly::monomial(&f7, Fe::ONE, 2));
        assert!(matches!(line_restrict(&xy, &pt(&[1, 2]), &pt(&[0, 0])), Err(Error::ZeroDirection)));
    }

    #[test]
    fn chain_rule_first_order() {
        let f7 = Field::prime(7).unwrap();
        let spec = RmSpec::new(&f7, 2, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let f = MultiPoly::random(&f7, 2, 5, &mut rng);
            let a = spec.random_point(&mut rng);
            let u = spec.random_point(&mut rng);
            if u.iter().all(|x| x.is_zero()) {
                continue;
            }
            let g = f.restrict(&a, &u).unwrap();
            assert!(g.len() <= 5);
            let t = f7.random(&mut rng);
            let pnt: Vec<Fe> = a.iter().zip(&u).map(|(&x, &y)| f7.add(x, f7.mul(t, y))).collect();
            let lhs = g.hasse(1).eval(t);
            let rhs = f7.add(
                f7.mul(f.hasse(&[1, 0]).eval(&pnt), u[0]),
                f7.mul(f.hasse(&[0, 1]).eval(&pnt), u[1]),
            );
            assert_eq!(lhs, rhs);
            let block = f.derivative_block(&pnt, 3);
            assert_eq!(restrict_block(&f7, &block, &u, 3), g.hasse_block(t, 3));
        }
    }

    #[test]
    fn multiplicity_budget() {
        let f7 = Field::prime(7).unwrap();
        let spec = RmSpec::new(&f7, 2, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let f = MultiPoly::random(&f7, 2, 4, &mut rng);
            let Some(d) = f.total_degree() else { continue };
            let total: usize = spec
                .points()
                .map(|p| match f.multiplicity_at(&p) {
                    Multiplicity::Finite(m) => m,
                    Multiplicity::Infinite => unreachable!(),
                })
                .sum();
            assert!(total <= d * 7);
        }
        let sq = MultiPoly::new(&f7, 2, [(vec![2, 0], Fe::ONE)]).unwrap();
        assert_eq!(sq.multiplicity_at(&pt(&[0, 3])), Multiplicity::Finite(2));
    }

    #[test]
    fn local_correct_clean_and_counted() {
        let f16 = Field::new(2, 4, None, 0).unwrap();
        let spec = RmSpec::new(&f16, 2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = MultiPoly::random(&f16, 2, 4, &mut rng);
        let word = PlantedWord::new(&spec, f.clone(), &Corruption::Points(vec![]), &mut rng).unwrap();
        for seed in 0..50 {
            let a = spec.random_point(&mut rng);
            let oracle = WordOracle::new(&word);
            assert_eq!(rm_local_correct(&spec, &oracle, &a, seed), Some(f.eval(&a)));
            assert_eq!(oracle.queries(), 16);
        }
    }

    #[test]
    fn local_list_basic() {
        let f31 = Field::prime(31).unwrap();
        let spec = RmSpec::new(&f31, 2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = MultiPoly::random(&f31, 2, 3, &mut rng);
        let word = PlantedWord::new(&spec, f.clone(), &Corruption::Random(0.1), &mut rng).unwrap();
        let list = rm_local_list(&spec, 2.0, 0.0, 9).unwrap();
        assert_eq!(list.len(), 31);
        let b = list[0].anchor.clone();
        let good = list.iter().find(|ad| ad.guess == [f.eval(&b)]).unwrap();
        let mut ok = 0;
        for _ in 0..40 {
            let a = spec.random_point(&mut rng);
            let oracle = WordOracle::new(&word);
            ok += (run_local_algorithm(&spec, &oracle, good, &a) == Some(f.eval(&a))) as usize;
            assert!(a == b || oracle.queries() == 31);
        }
        assert!(ok >= 34);
        let oracle = WordOracle::new(&word);
        assert_eq!(run_local_algorithm(&spec, &oracle, good, &b), None);
    }

    #[test]
    fn johnson_advice_contains_truth() {
        let f11 = Field::prime(11).unwrap();
        let spec = RmSpec::new(&f11, 2, 3).unwrap();
        assert_eq!(johnson_grid(&spec, 2, 4.0), 11);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let f = MultiPoly::random(&f11, 2, 3, &mut rng);
        let word = PlantedWord::new(&spec, f.clone(), &Corruption::Points(vec![]), &mut rng).unwrap();
        let oracle = WordOracle::new(&word);
        let v = rm_local_list_johnson(&spec, &oracle, 2, 4.0, 0.0, 1).unwrap();
        assert_eq!(oracle.queries(), 121 * 11);
        let b = &v[0].anchor;
        assert!(v.iter().any(|ad| ad.guess == f.derivative_block(b, 2)));
        assert!((v.len() as f64) <= (11.0f64 / 2.0).powi(2));
        let a = spec.random_point(&mut rng);
        let adv = v.iter().find(|ad| ad.guess == f.derivative_block(b, 2)).unwrap();
        if &a != b {
            let o2 = WordOracle::new(&word);
            assert_eq!(run_local_algorithm(&spec, &o2, adv, &a), Some(f.eval(&a)));
        }
    }

    #[test]
    fn composed_queries() {
        let f7 = Field::prime(7).unwrap();
        let spec = RmSpec::new(&f7, 2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = MultiPoly::random(&f7, 2, 2, &mut rng);
        let st = estimate_local_success(&spec, &f, &DecoderKind::Composed { sigma: 2.0, xi: 0.0 }, &Corruption::Random(0.0), 20, 1)
            .unwrap();
        assert_eq!(st.max_queries, 49);
        let lc = estimate_local_success(&spec, &f, &DecoderKind::LocalCorrect, &Corruption::Random(0.0), 50, 2).unwrap();
        assert_eq!(lc.success_rate, 1.0);
    }

    #[test]
    fn format_round_trip() {
        let f5 = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = MultiPoly::random(&f5, 3, 3, &mut rng);
        assert_eq!(MultiPoly::parse(&f5, 3, &f.format()).unwrap(), f);
    }
}
