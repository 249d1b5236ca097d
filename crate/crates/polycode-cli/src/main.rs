mod channel;
mod spec_file;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use polycode::analysis::{bound_calc, brute_force_list, BoundKind};
use polycode::lattice::{fast_gs_interpolate, fast_mult_interpolate};
use polycode::rm::{rm_local_correct, MultiPoly, WordOracle};
use polycode::rs::{ceil_sqrt, DecodeOutcome};
use polycode::util::stream_rng;
use polycode::{Fe, Field, UniPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use channel::{channel_corrupt, Channel};
use spec_file::{CodeSpec, SpecFile};

#[derive(Parser)]
#[command(name = "polycode", version, about = "Encode, corrupt and list decode polynomial codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Unique,
    Sudan,
    Gs,
    Mult,
    MultCap,
    Subfield,
    RmLocal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Bound {
    Johnson,
    GenSingleton,
}

#[derive(Subcommand)]
enum Cmd {
    /// Message file to codeword file.
    Encode {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a seeded channel to a word.
    Corrupt {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        errors: Option<usize>,
        #[arg(long)]
        error_rate: Option<f64>,
        #[arg(long)]
        burst: Option<usize>,
        /// Comma-separated positions.
        #[arg(long)]
        positions: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List decode a received word.
    Decode {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        /// Where to write the best message (the corrected table for rm-local).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        agreement: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare a decoder against exhaustive search.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        /// Received word; generated from the seed when absent.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        agreement: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        errors: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Time Gaussian-elimination against lattice interpolation.
    Bench {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Johnson and generalized Singleton calculators.
    Bounds {
        #[arg(long, value_enum)]
        kind: Bound,
        #[arg(long)]
        delta: Option<Rational64>,
        #[arg(long)]
        alpha: Option<Rational64>,
        #[arg(long)]
        list: Option<u64>,
        #[arg(long)]
        rate: Option<Rational64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        alphabet: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

struct Report {
    algo: String,
    threshold: usize,
    entries: Vec<(usize, String)>,
    dimension: Option<usize>,
    best: Option<String>,
}

impl Report {
    fn from_outcome<S>(algo: &str, out: &DecodeOutcome<S>, fmt: impl Fn(&UniPoly) -> String) -> Report {
        let entries: Vec<(usize, String)> = out.entries.iter().map(|e| (e.agreement, fmt(&e.message))).collect();
        Report {
            algo: algo.to_string(),
            threshold: out.threshold,
            best: out.entries.first().map(|e| fmt(&e.message)),
            entries,
            dimension: out.solution_space.as_ref().and_then(|s| s.dimension()),
        }
    }

    fn raise_threshold(&mut self, t: usize) {
        if t > self.threshold {
            self.threshold = t;
            self.entries.retain(|e| e.0 >= t);
            self.best = self.entries.first().map(|e| e.1.clone());
        }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut s = format!("algo={}\nthreshold={}\ncount={}\n", self.algo, self.threshold, self.entries.len());
                if let Some(d) = self.dimension {
                    s += &format!("dimension={d}\n");
                }
                for (i, (a, m)) in self.entries.iter().enumerate() {
                    s += &format!("entry={i} agreement={a} message={}\n", m.trim_end().replace('\n', " | "));
                }
                s
            }
            Format::Structured => {
                let entries: Vec<_> = self.entries.iter().map(|(a, m)| json!({"agreement": a, "message": m.trim_end()})).collect();
                let doc = json!({
                    "algo": self.algo,
                    "threshold": self.threshold,
                    "count": self.entries.len(),
                    "dimension": self.dimension,
                    "entries": entries,
                });
                serde_json::to_string_pretty(&doc).expect("json") + "\n"
            }
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_spec(path: &Path) -> Result<CodeSpec> {
    SpecFile::parse(&read(path)?)?.build()
}

fn poly_text(p: &UniPoly) -> String {
    format!("{p}\n")
}

fn perturb_fe(field: &Field) -> impl FnMut(&Fe, &mut ChaCha8Rng) -> Fe + '_ {
    move |x, rng| field.add(*x, field.random_nonzero(rng))
}

fn perturb_block(field: &Field) -> impl FnMut(&Vec<Fe>, &mut ChaCha8Rng) -> Vec<Fe> + '_ {
    move |b, rng| {
        let mut d: Vec<Fe> = b.iter().map(|_| field.random(rng)).collect();
        if d.iter().all(|x| x.is_zero()) {
            d[0] = field.random_nonzero(rng);
        }
        b.iter().zip(&d).map(|(&x, &y)| field.add(x, y)).collect()
    }
}

fn parse_table(field: &Field, text: &str) -> Result<Vec<Fe>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| Ok(field.parse(l)?)).collect()
}

fn format_table(field: &Field, w: &[Fe]) -> String {
    w.iter().map(|&x| field.format(x) + "\n").collect()
}

fn encode(spec: &Path, input: &Path, out: Option<&Path>) -> Result<()> {
    let text = read(input)?;
    let word = match load_spec(spec)? {
        CodeSpec::Rs(c) => c.format_word(&c.encode(&UniPoly::parse(&c.field, &text)?)?),
        CodeSpec::Mult(c) => c.format_word(&c.encode(&UniPoly::parse(&c.field, &text)?)?),
        CodeSpec::Subfield(c) => c.format_word(&c.encode(&UniPoly::parse(&c.ext, &text)?)?),
        CodeSpec::Rm(c) => format_table(&c.field, &c.encode(&MultiPoly::parse(&c.field, c.m, &text)?)?),
    };
    emit(out, &word)
}

fn channel_from(errors: Option<usize>, rate: Option<f64>, burst: Option<usize>, positions: Option<&str>) -> Result<Channel> {
    let given = [errors.is_some(), rate.is_some(), burst.is_some(), positions.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        bail!("give exactly one of --errors, --error-rate, --burst, --positions");
    }
    Ok(if let Some(e) = errors {
        Channel::Count(e)
    } else if let Some(r) = rate {
        Channel::Random(r)
    } else if let Some(b) = burst {
        Channel::Burst(b)
    } else {
        let text = positions.unwrap_or_default();
        let ps = text
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<usize>().map_err(|e| anyhow!("position {t:?}: {e}")))
            .collect::<Result<Vec<_>>>()?;
        Channel::Explicit(ps)
    })
}

fn corrupt(spec: &Path, input: &Path, out: Option<&Path>, model: &Channel, seed: u64) -> Result<()> {
    let text = read(input)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (word, positions) = match load_spec(spec)? {
        CodeSpec::Rs(c) => {
            let (w, p) = channel_corrupt(&c.parse_word(&text)?, model, &mut rng, perturb_fe(&c.field))?;
            (c.format_word(&w), p)
        }
        CodeSpec::Mult(c) => {
            let (w, p) = channel_corrupt(&c.parse_word(&text)?, model, &mut rng, perturb_block(&c.field))?;
            (c.format_word(&w), p)
        }
        CodeSpec::Subfield(c) => {
            let (w, p) = channel_corrupt(&c.parse_word(&text)?, model, &mut rng, perturb_fe(&c.ext))?;
            (c.format_word(&w), p)
        }
        CodeSpec::Rm(c) => {
            let (w, p) = channel_corrupt(&parse_table(&c.field, &text)?, model, &mut rng, perturb_fe(&c.field))?;
            (format_table(&c.field, &w), p)
        }
    };
    emit(out, &word)?;
    let list: Vec<String> = positions.iter().map(|p| p.to_string()).collect();
    eprintln!("errors={}\npositions={}", positions.len(), list.join(","));
    Ok(())
}

fn usage(algo: Algo) -> anyhow::Error {
    let name = algo.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    anyhow!("algorithm {name} does not apply to this code family")
}

fn run_decoder(code: &CodeSpec, text: &str, algo: Algo, agreement: Option<usize>, r: Option<usize>) -> Result<Report> {
    let mut rep = match (code, algo) {
        (CodeSpec::Rs(c), Algo::Unique) => Report::from_outcome("unique", &c.unique_decode(&c.parse_word(text)?), poly_text),
        (CodeSpec::Rs(c), Algo::Sudan) => Report::from_outcome("sudan", &c.sudan_decode(&c.parse_word(text)?)?, poly_text),
        (CodeSpec::Rs(c), Algo::Gs) => {
            let w = c.parse_word(text)?;
            let out = match agreement {
                Some(t) => c.gs_decode_at(&w, t, r)?,
                None => c.gs_decode(&w, r)?,
            };
            Report::from_outcome("gs", &out, poly_text)
        }
        (CodeSpec::Mult(c), Algo::Mult) => Report::from_outcome("mult", &c.list_decode(&c.parse_word(text)?)?, poly_text),
        (CodeSpec::Mult(c), Algo::MultCap) => {
            Report::from_outcome("mult-cap", &c.cap_decode(&c.parse_word(text)?, r.unwrap_or(c.s))?, poly_text)
        }
        (CodeSpec::Subfield(c), Algo::Subfield) => {
            let mut c = c.clone();
            if let Some(r) = r {
                c.r = r;
            }
            Report::from_outcome("subfield", &c.decode(&c.parse_word(text)?)?, poly_text)
        }
        _ => return Err(usage(algo)),
    };
    if let Some(t) = agreement {
        rep.raise_threshold(t);
    }
    Ok(rep)
}

fn rm_local(code: &CodeSpec, text: &str, seed: u64, out: Option<&Path>, format: Format) -> Result<bool> {
    let CodeSpec::Rm(c) = code else { return Err(usage(Algo::RmLocal)) };
    let table = parse_table(&c.field, text)?;
    let word = polycode::rm::TableWord::new(c, table.clone())?;
    let mut corrected = Vec::with_capacity(table.len());
    let (mut bottoms, mut changed, mut queries) = (0usize, 0usize, 0usize);
    for (i, point) in c.points().enumerate() {
        let oracle = WordOracle::new(&word);
        let s: u64 = stream_rng(seed, i as u64).gen();
        match rm_local_correct(c, &oracle, &point, s) {
            Some(v) => {
                changed += (v != table[i]) as usize;
                corrected.push(v);
            }
            None => {
                bottoms += 1;
                corrected.push(table[i]);
            }
        }
        queries = queries.max(oracle.queries());
    }
    if let Some(p) = out {
        emit(Some(p), &format_table(&c.field, &corrected))?;
    }
    let text = match format {
        Format::Text => format!("algo=rm-local\npoints={}\nbottom={bottoms}\nchanged={changed}\nqueries_per_point={queries}\n", table.len()),
        Format::Structured => {
            serde_json::to_string_pretty(&json!({
                "algo": "rm-local", "points": table.len(), "bottom": bottoms, "changed": changed, "queries_per_point": queries
            }))? + "\n"
        }
    };
    print!("{text}");
    Ok(bottoms < table.len())
}

#[allow(clippy::too_many_arguments)]
fn decode(spec: &Path, input: &Path, out: Option<&Path>, algo: Algo, agreement: Option<usize>, r: Option<usize>, seed: u64, format: Format) -> Result<bool> {
    let code = load_spec(spec)?;
    let text = read(input)?;
    if algo == Algo::RmLocal {
        return rm_local(&code, &text, seed, out, format);
    }
    let rep = run_decoder(&code, &text, algo, agreement, r)?;
    print!("{}", rep.render(format));
    if let (Some(p), Some(best)) = (out, &rep.best) {
        emit(Some(p), best)?;
    }
    Ok(!rep.entries.is_empty())
}

fn nominal_threshold(code: &CodeSpec, algo: Algo, agreement: Option<usize>, r: Option<usize>) -> Result<usize> {
    Ok(match (code, algo) {
        (CodeSpec::Rs(c), Algo::Unique) => c.unique_threshold(),
        (CodeSpec::Rs(c), Algo::Sudan) => c.sudan_threshold(),
        (CodeSpec::Rs(c), Algo::Gs) => agreement.unwrap_or(c.gs_threshold()),
        (CodeSpec::Mult(c), Algo::Mult) => c.list_threshold(),
        (CodeSpec::Mult(c), Algo::MultCap) => c.cap_threshold(r.unwrap_or(c.s)),
        (CodeSpec::Subfield(c), Algo::Subfield) => {
            let mut c = c.clone();
            c.r = r.unwrap_or(c.r);
            c.threshold()
        }
        _ => return Err(usage(algo)),
    })
}

/// A planted codeword with `errors` symbol errors, rendered as a word file.
fn random_word(code: &CodeSpec, seed: u64, errors: usize) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let model = Channel::Count(errors);
    Ok(match code {
        CodeSpec::Rs(c) => {
            let cw = c.encode(&UniPoly::random(&c.field, c.k, &mut rng))?;
            c.format_word(&channel_corrupt(&cw, &model, &mut rng, perturb_fe(&c.field))?.0)
        }
        CodeSpec::Mult(c) => {
            let cw = c.encode(&UniPoly::random(&c.field, c.k, &mut rng))?;
            c.format_word(&channel_corrupt(&cw, &model, &mut rng, perturb_block(&c.field))?.0)
        }
        CodeSpec::Subfield(c) => {
            let cw = c.encode(&UniPoly::random(&c.ext, c.k, &mut rng))?;
            c.format_word(&channel_corrupt(&cw, &model, &mut rng, perturb_fe(&c.ext))?.0)
        }
        CodeSpec::Rm(_) => bail!("verify does not support rm"),
    })
}

fn oracle_list(code: &CodeSpec, text: &str, t: usize) -> Result<Vec<String>> {
    Ok(match code {
        CodeSpec::Rs(c) => brute_force_list(c, &c.parse_word(text)?, t)?.messages().iter().map(poly_text).collect(),
        CodeSpec::Mult(c) => brute_force_list(c, &c.parse_word(text)?, t)?.messages().iter().map(poly_text).collect(),
        CodeSpec::Subfield(c) => brute_force_list(c, &c.parse_word(text)?, t)?.messages().iter().map(poly_text).collect(),
        CodeSpec::Rm(_) => bail!("verify does not support rm"),
    })
}

#[allow(clippy::too_many_arguments)]
fn verify(spec: &Path, input: Option<&Path>, algo: Algo, agreement: Option<usize>, r: Option<usize>, errors: Option<usize>, seed: u64, format: Format) -> Result<bool> {
    let code = load_spec(spec)?;
    let n = match &code {
        CodeSpec::Rs(c) => c.n(),
        CodeSpec::Mult(c) => c.n(),
        CodeSpec::Subfield(c) => c.n(),
        CodeSpec::Rm(_) => bail!("verify does not support rm"),
    };
    let text = match input {
        Some(p) => read(p)?,
        None => {
            let t = nominal_threshold(&code, algo, agreement, r)?;
            random_word(&code, seed, errors.unwrap_or(n.saturating_sub(t)))?
        }
    };
    let rep = run_decoder(&code, &text, algo, agreement, r)?;
    let mut got: Vec<String> = rep.entries.iter().map(|e| e.1.clone()).collect();
    let mut want = oracle_list(&code, &text, rep.threshold)?;
    got.sort();
    want.sort();
    let missing = want.iter().filter(|m| !got.contains(m)).count();
    let extra = got.iter().filter(|m| !want.contains(m)).count();
    let ok = missing == 0 && extra == 0;
    let out = match format {
        Format::Text => format!(
            "algo={}\nthreshold={}\ndecoder={}\noracle={}\nmissing={missing}\nextra={extra}\nstatus={}\n",
            rep.algo,
            rep.threshold,
            got.len(),
            want.len(),
            if ok { "ok" } else { "mismatch" }
        ),
        Format::Structured => {
            serde_json::to_string_pretty(&json!({
                "algo": rep.algo, "threshold": rep.threshold, "decoder": got.len(), "oracle": want.len(),
                "missing": missing, "extra": extra, "ok": ok
            }))? + "\n"
        }
    };
    print!("{out}");
    Ok(ok)
}

fn bench(spec: &Path, trials: usize, r: Option<usize>, seed: u64) -> Result<()> {
    let code = load_spec(spec)?;
    let mut gauss = 0.0;
    let mut lattice = 0.0;
    for trial in 0..trials {
        let mut rng = stream_rng(seed, trial as u64);
        match &code {
            CodeSpec::Rs(c) => {
                let l = r.unwrap_or(2);
                let w: Vec<Fe> = (0..c.n()).map(|_| c.field.random(&mut rng)).collect();
                let d = ceil_sqrt((c.n() * c.k * l * (l + 1)) as u64) as usize;
                let start = Instant::now();
                c.gs_interpolate(&w, l, d)?;
                gauss += start.elapsed().as_secs_f64();
                let start = Instant::now();
                fast_gs_interpolate(c, &w, l)?;
                lattice += start.elapsed().as_secs_f64();
            }
            CodeSpec::Mult(c) => {
                let rr = r.unwrap_or(c.s);
                let w: Vec<Vec<Fe>> = (0..c.n()).map(|_| (0..c.s).map(|_| c.field.random(&mut rng)).collect()).collect();
                let start = Instant::now();
                c.cap_interpolate(&w, rr)?;
                gauss += start.elapsed().as_secs_f64();
                let start = Instant::now();
                fast_mult_interpolate(c, &w, rr)?;
                lattice += start.elapsed().as_secs_f64();
            }
            _ => bail!("bench supports the rs and mult families"),
        }
    }
    let t = trials.max(1) as f64;
    println!("method\ttrials\tmean_ms");
    println!("gaussian\t{trials}\t{:.3}", gauss / t * 1e3);
    println!("lattice\t{trials}\t{:.3}", lattice / t * 1e3);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn bounds(kind: Bound, delta: Option<Rational64>, alpha: Option<Rational64>, list: Option<u64>, rate: Option<Rational64>, n: Option<u64>, alphabet: Option<u64>, format: Format) -> Result<()> {
    let missing = |name: &str| anyhow!("--{name} is required");
    let bk = match kind {
        Bound::Johnson => BoundKind::Johnson { delta: delta.ok_or_else(|| missing("delta"))?, alpha: alpha.ok_or_else(|| missing("alpha"))? },
        Bound::GenSingleton => BoundKind::GenSingleton {
            list: list.ok_or_else(|| missing("list"))?,
            rate: rate.ok_or_else(|| missing("rate"))?,
            n: n.ok_or_else(|| missing("n"))?,
            alphabet: alphabet.ok_or_else(|| missing("alphabet"))?,
        },
    };
    let rep = bound_calc(&bk)?;
    match format {
        Format::Text => print!("{}", rep.format()),
        Format::Structured => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "value": rep.value.to_string(), "correction": rep.correction, "approx": rep.approx, "floor": rep.floor
            }))?
        ),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Encode { spec, input, out } => encode(&spec, &input, out.as_deref()).map(|_| true),
        Cmd::Corrupt { spec, input, out, errors, error_rate, burst, positions, seed } => {
            let model = channel_from(errors, error_rate, burst, positions.as_deref())?;
            corrupt(&spec, &input, out.as_deref(), &model, seed).map(|_| true)
        }
        Cmd::Decode { spec, input, out, algo, agreement, r, seed, format } => {
            decode(&spec, &input, out.as_deref(), algo, agreement, r, seed, format)
        }
        Cmd::Verify { spec, input, algo, agreement, r, errors, seed, format } => {
            verify(&spec, input.as_deref(), algo, agreement, r, errors, seed, format)
        }
        Cmd::Bench { spec, trials, r, seed } => bench(&spec, trials, r, seed).map(|_| true),
        Cmd::Bounds { kind, delta, alpha, list, rate, n, alphabet, format } => {
            bounds(kind, delta, alpha, list, rate, n, alphabet, format).map(|_| true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
