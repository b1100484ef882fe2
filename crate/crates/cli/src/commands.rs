use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::anyhow;
use serde_json::{json, Value};

use nustable::distributions::{NuNormal, NuStable, SechDist, SymmetricStable, XiDist};
use nustable::families::{FamilyKind, NuFamily, NuSampler, Param};
use nustable::harness::{self, tolerances, ExperimentReport, McConfig};
use nustable::numerics::{ks_band, ks_statistic, sample_blocks, EmpiricalSample};
use nustable::series::{expand_pgf, expand_series, fmt17};

use crate::config::{Cli, Command, Common, Dist, Format};
use crate::Failure;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(anyhow!(msg.into()))
}

fn output(common: &Common) -> Result<Box<dyn Write>, Failure> {
    Ok(match &common.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            Failure::Io(anyhow!("cannot create {}: {e}", path.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Data commands write CSV or JSON.
fn data_format(common: &Common) -> Result<Format, Failure> {
    match common.format(Format::Csv) {
        Format::Text => Err(usage("text output is only available for verify")),
        f => Ok(f),
    }
}

/// `# `-prefixed lines carrying the command and its resolved configuration.
fn csv_preamble(out: &mut dyn Write, command: &str, config: &Value, extra: &[(&str, String)]) -> io::Result<()> {
    writeln!(out, "# nustable {command}")?;
    writeln!(out, "# config {config}")?;
    for (k, v) in extra {
        writeln!(out, "# {k} {v}")?;
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<bool, Failure> {
    let c = &cli.common;
    if c.workers == 0 {
        return Err(usage("--workers must be at least 1"));
    }
    match &cli.command {
        Command::Coeffs => coeffs(c).map(|_| true),
        Command::Figure1 { n_min, n_max } => figure1(c, *n_min, *n_max).map(|_| true),
        Command::Xi => xi(c).map(|_| true),
        Command::Sample { dist } => sample(c, *dist).map(|_| true),
        Command::Verify {
            experiment,
            n_min,
            n_max,
        } => verify(c, experiment, *n_min, *n_max),
    }
}

fn coeffs(c: &Common) -> Result<(), Failure> {
    let format = data_format(c)?;
    let family = c.family()?;
    let param = c.param(&family, 2, 0.5)?;
    let (coeffs, tail, clamped) = match c.k {
        Some(k) => {
            let s = expand_series(&family, &param, k)?;
            let tail = s.tail_bound().unwrap_or(f64::NAN);
            (s.into_coeffs(), tail, 0.0)
        }
        None => {
            let pmf = expand_pgf(&family, &param, None)?;
            (pmf.probs().to_vec(), pmf.tail_mass(), pmf.clamped_mass())
        }
    };
    let order = coeffs.len() - 1;
    let sum: f64 = coeffs.iter().sum();
    let mut out = output(c)?;
    match format {
        Format::Csv => {
            csv_preamble(
                &mut out,
                "coeffs",
                &c.resolved(),
                &[
                    ("order", order.to_string()),
                    ("tail_bound", fmt17(tail)),
                    ("sum", fmt17(sum)),
                    ("clamped_mass", fmt17(clamped)),
                ],
            )?;
            writeln!(out, "k,p_k")?;
            for (k, &v) in coeffs.iter().enumerate() {
                if v != 0.0 {
                    writeln!(out, "{k},{}", fmt17(v))?;
                }
            }
        }
        _ => {
            let rows: Vec<Value> = coeffs
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0.0)
                .map(|(k, &v)| json!({ "k": k, "p_k": v }))
                .collect();
            let doc = json!({
                "command": "coeffs",
                "config": c.resolved(),
                "family": family.to_string(),
                "p": param.p(),
                "order": order,
                "tail_bound": tail,
                "sum": sum,
                "clamped_mass": clamped,
                "coefficients": rows,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn first_x(c: &Common) -> Result<f64, Failure> {
    let x = c.x.first().copied().unwrap_or(1.0);
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(usage(format!("--x must be positive, got {x}")))
    }
}

fn figure1(c: &Common, n_min: u32, n_max: u32) -> Result<(), Failure> {
    let format = data_format(c)?;
    if n_min == 0 || n_min >= n_max {
        return Err(usage(format!("need 1 ≤ --n-min < --n-max, got {n_min} and {n_max}")));
    }
    let x = first_x(c)?;
    let curve = harness::figure1_curve(x, n_min, n_max)?;
    let a = XiDist::new(1)?.cdf(x);
    let mut out = output(c)?;
    match format {
        Format::Csv => {
            csv_preamble(
                &mut out,
                "figure1",
                &c.resolved(),
                &[("x", fmt17(x)), ("A(x)", fmt17(a))],
            )?;
            writeln!(out, "n,S,A")?;
            for (n, s) in &curve {
                writeln!(out, "{n},{},{}", fmt17(*s), fmt17(a))?;
            }
        }
        _ => {
            let rows: Vec<Value> = curve.iter().map(|(n, s)| json!({ "n": n, "S": s })).collect();
            let doc = json!({ "command": "figure1", "config": c.resolved(), "x": x, "A": a, "curve": rows });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn xi(c: &Common) -> Result<(), Failure> {
    let format = data_format(c)?;
    let dist = XiDist::new(c.m)?;
    let xs: Vec<f64> = if c.x.is_empty() {
        (1..=50).map(|i| 0.1 * i as f64).collect()
    } else {
        c.x.clone()
    };
    let n = c.sample_size.unwrap_or(0);
    let mc = (n > 0).then(|| {
        let v = sample_blocks(n, c.seed, 0, c.workers, |r| dist.sample(r));
        EmpiricalSample::new(v).expect("finite draws")
    });
    let mut rows = Vec::new();
    for &x in &xs {
        rows.push((x, dist.cdf(x), "inversion"));
        if let Some(s) = &mc {
            rows.push((x, s.ecdf(x), "monte-carlo"));
        }
    }
    let mut out = output(c)?;
    match format {
        Format::Csv => {
            csv_preamble(&mut out, "xi", &c.resolved(), &[("kl_terms", dist.kl_terms().to_string())])?;
            writeln!(out, "x,value,method")?;
            for (x, v, m) in rows {
                writeln!(out, "{},{},{m}", fmt17(x), fmt17(v))?;
            }
        }
        _ => {
            let rows: Vec<Value> = rows
                .into_iter()
                .map(|(x, v, m)| json!({ "x": x, "value": v, "method": m }))
                .collect();
            let doc = json!({ "command": "xi", "config": c.resolved(), "rows": rows });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn sample(c: &Common, dist: Dist) -> Result<(), Failure> {
    let format = data_format(c)?;
    let n = c.sample_size.unwrap_or(10_000);
    let (seed, w) = (c.seed, c.workers);
    let mut self_check = None;
    let values: Vec<f64> = match dist {
        Dist::Sech => {
            let d = SechDist::new(c.a.unwrap_or(1.0))?;
            let v = sample_blocks(n, seed, 0, w, |r| d.sample(r));
            if n > 0 {
                let s = EmpiricalSample::new(v.clone()).expect("finite draws");
                self_check = Some((ks_statistic(&s, |x| d.cdf(x)), ks_band(n)));
            }
            v
        }
        Dist::Xi => {
            let d = XiDist::new(c.m)?;
            sample_blocks(n, seed, 0, w, |r| d.sample(r))
        }
        Dist::Nu => {
            let family = c.family()?;
            let param = c.param(&family, 2, 0.5)?;
            let s = NuSampler::new(&family, &param)?;
            sample_blocks(n, seed, 0, w, |r| s.sample(r) as f64)
        }
        Dist::NuNormal => {
            let d = NuNormal::new(&c.family()?, c.a.unwrap_or(0.5))?;
            sample_blocks(n, seed, 0, w, |r| d.sample(r))
        }
        Dist::NuStable => {
            let d = NuStable::new(&c.family()?, c.alpha, c.a.unwrap_or(1.0))?;
            sample_blocks(n, seed, 0, w, |r| d.sample(r))
        }
        Dist::Stable => {
            let d = SymmetricStable::new(c.alpha, c.a.unwrap_or(1.0))?;
            sample_blocks(n, seed, 0, w, |r| d.sample(r))
        }
    };
    let integer = dist == Dist::Nu;
    let mut out = output(c)?;
    match format {
        Format::Csv => {
            let name = format!("{dist:?}").to_lowercase();
            csv_preamble(&mut out, "sample", &c.resolved(), &[("dist", name)])?;
            writeln!(out, "value")?;
            for v in &values {
                if integer {
                    writeln!(out, "{}", *v as u64)?;
                } else {
                    writeln!(out, "{}", fmt17(*v))?;
                }
            }
            if let Some((ks, band)) = self_check {
                writeln!(out, "# ks_self_check {} band {}", fmt17(ks), fmt17(band))?;
            }
        }
        _ => {
            let mut doc = json!({ "command": "sample", "config": c.resolved(), "values": values });
            if let Some((ks, band)) = self_check {
                doc["ks_self_check"] = json!({ "ks": ks, "band": band });
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn params_for(family: &NuFamily, c: &Common, lattice: &[u32], continuous: &[f64]) -> Result<Vec<Param>, Failure> {
    if c.n.is_some() || c.p.is_some() {
        return Ok(vec![c.param(family, 2, 0.5)?]);
    }
    let ps = match family.kind() {
        FamilyKind::Geometric | FamilyKind::Melamed => continuous
            .iter()
            .map(|&p| family.admit(p))
            .collect::<Result<Vec<_>, _>>()?,
        _ => lattice
            .iter()
            .map(|&n| family.with_n(n))
            .collect::<Result<Vec<_>, _>>()?,
    };
    Ok(ps)
}

fn verify(c: &Common, experiment: &str, n_min: Option<u32>, n_max: Option<u32>) -> Result<bool, Failure> {
    let format = c.format(Format::Json);
    if format == Format::Csv {
        return Err(usage("verify writes json or text"));
    }
    let mc = |default_n: usize| McConfig::new(c.sample_size.unwrap_or(default_n), c.seed).workers(c.workers);
    let range = |lo: u32, hi: u32| -> Result<Vec<u32>, Failure> {
        let (lo, hi) = (n_min.unwrap_or(lo), n_max.unwrap_or(hi));
        if lo == 0 || lo > hi {
            return Err(usage(format!("invalid n range {lo}..{hi}")));
        }
        Ok((lo..=hi).collect())
    };
    let family = c.family()?;
    let report: ExperimentReport = match experiment {
        "functional-equation" => {
            let grid: Vec<f64> = (0..=100).map(|i| 0.1 * i as f64).collect();
            let ps = params_for(&family, c, &[1, 2, 3, 5, 10], &[0.1, 0.5, 0.9])?;
            harness::run_functional_equation(&family, &ps, &grid)?
        }
        "commutativity" => {
            let ps = params_for(&family, c, &[2, 3, 4, 5], &[0.3, 0.6])?;
            let pairs: Vec<(Param, Param)> = ps
                .iter()
                .enumerate()
                .flat_map(|(i, a)| ps[i + 1..].iter().map(move |b| (*a, *b)))
                .collect();
            if pairs.is_empty() {
                return Err(usage("commutativity needs the default parameter set; drop --n/--p"));
            }
            harness::run_commutativity(&family, &pairs, c.k.unwrap_or(tolerances::COMMUTATIVITY_ORDER))?
        }
        "theorem41" => {
            let ns = range(2, 50)?;
            let n = c.sample_size.unwrap_or(0);
            let mc = (n > 0).then(|| mc(n));
            harness::run_theorem41(first_x(c)?, &ns, mc)?
        }
        "stability" => {
            let param = c.param(&family, 3, 0.25)?;
            harness::run_stability(&family, c.alpha, &param, c.a.unwrap_or(0.5), mc(100_000))?
        }
        "lln" => {
            let ps = match (c.n, c.p) {
                (None, None) => params_for(&family, c, &[2, 3, 5, 10, 50], &[0.5, 0.2, 0.05, 0.01])?,
                _ => vec![c.param(&family, 2, 0.5)?],
            };
            harness::run_lln(&family, &ps, mc(100_000))?
        }
        "characterization" => harness::run_characterization(c.n.unwrap_or(2), mc(100_000))?,
        "pgf-validity" => harness::run_pgf_validity(&range(2, 32)?)?,
        "xi-moments" => harness::run_xi_moments(c.m, mc(1_000_000))?,
        "scale-mixture" => harness::run_scale_mixture(mc(1_000_000))?,
        "m2-identities" => harness::run_m2_identities(mc(1_000_000))?,
        "pd-probes" => harness::run_pd_probes()?,
        other => return Err(usage(format!("unknown experiment '{other}'"))),
    };
    let mut out = output(c)?;
    match format {
        Format::Text => write!(out, "{}", report.to_text())?,
        _ => {
            let mut doc = serde_json::to_value(&report).expect("json");
            doc["config"] = c.resolved();
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        }
    }
    out.flush()?;
    Ok(report.pass)
}
