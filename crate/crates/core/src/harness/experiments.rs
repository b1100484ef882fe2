use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::Serialize;

use super::report::{Check, ExperimentReport};
use super::tolerances as tol;
use crate::distributions::{LaplaceDist, NuStable, SechDist, WienerSquareIntegral, XiDist};
use crate::error::{domain, Result};
use crate::families::{FamilyKind, NuFamily, NuSampler, Param};
use crate::numerics::laplace::{gaver_stehfest, DEFAULT_ORDER};
use crate::numerics::parallel::stream_base;
use crate::numerics::{
    chf_positive_definiteness_probe, ks_statistic, ks_two_sample, sample_blocks, EmpiricalSample,
    RngStream,
};
use crate::series::{expand_pgf, expand_series};

/// Names accepted by [`run_named`].
pub const EXPERIMENTS: [&str; 11] = [
    "functional-equation",
    "commutativity",
    "theorem41",
    "stability",
    "lln",
    "characterization",
    "pgf-validity",
    "xi-moments",
    "scale-mixture",
    "m2-identities",
    "pd-probes",
];

/// Monte Carlo settings shared by the sampling experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub n: usize,
    pub seed: u64,
    pub workers: usize,
}

impl McConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        Self { n, seed, workers: 1 }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    fn draw<T: Send>(&self, tag: u32, sub: u32, f: impl Fn(&mut RngStream) -> T + Sync) -> Vec<T> {
        let base = stream_base(tag) + ((sub as u64) << 24);
        sample_blocks(self.n, self.seed, base, self.workers, f)
    }

    fn record(&self, r: &mut ExperimentReport) {
        r.param("N", self.n).param("seed", self.seed).param("workers", self.workers);
    }
}

// Stream tags keep the sampling experiments on disjoint substreams.
const TAG_THEOREM41: u32 = 1;
const TAG_STABILITY: u32 = 2;
const TAG_LLN: u32 = 3;
const TAG_CHARACTERIZATION: u32 = 4;
const TAG_XI: u32 = 5;
const TAG_MIXTURE: u32 = 6;
const TAG_M2: u32 = 7;

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// `|mean e^{−tY} − L(t)|` in standard errors, with the variance of
/// `e^{−tY}` taken from the exact transform, `L(2t) − L(t)²`.
fn transform_z_score(sample: &[f64], t: f64, exact: impl Fn(f64) -> f64) -> f64 {
    let emp = sample.iter().map(|y| (-t * y).exp()).sum::<f64>() / sample.len() as f64;
    let var = (exact(2.0 * t) - exact(t).powi(2)).max(1e-300);
    (emp - exact(t)).abs() / (var / sample.len() as f64).sqrt()
}

fn label(p: &Param) -> String {
    match p.n() {
        Some(n) => format!("n={n}"),
        None => format!("p={}", p.p()),
    }
}

/// Largest `|φ(t) − P_p(φ(pt))|` over `grid` for every parameter.
pub fn run_functional_equation(
    family: &NuFamily,
    params: &[Param],
    grid: &[f64],
) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("functional-equation");
    r.param("family", family.to_string())
        .param("p", params.iter().map(Param::p).collect::<Vec<_>>())
        .param("grid", (grid.first(), grid.last(), grid.len()));
    for p in params {
        let mut worst = 0.0f64;
        for &t in grid {
            let lhs = family.phi(t)?;
            let rhs = family.pgf_eval(p, family.phi(p.p() * t)?)?;
            worst = worst.max((lhs - rhs).abs());
        }
        r.metric(
            format!("residual {}", label(p)),
            worst,
            Check::AtMost(tol::FUNCTIONAL_EQUATION),
        );
    }
    Ok(r.finish())
}

/// `max_k |[P_{p1}∘P_{p2}]_k − [P_{p2}∘P_{p1}]_k|` up to `order`.
pub fn run_commutativity(
    family: &NuFamily,
    pairs: &[(Param, Param)],
    order: usize,
) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("commutativity");
    r.param("family", family.to_string()).param("K", order);
    for (a, b) in pairs {
        let sa = expand_series(family, a, order)?;
        let sb = expand_series(family, b, order)?;
        let ab = sa.compose(&sb)?;
        let ba = sb.compose(&sa)?;
        let diff = ab
            .coeffs()
            .iter()
            .zip(ba.coeffs())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        r.metric(
            format!("max difference ({}, {})", label(a), label(b)),
            diff,
            Check::AtMost(tol::COMMUTATIVITY),
        );
    }
    Ok(r.finish())
}

/// `S(n, x) = Σ_{k ≤ n²x} p_k(n)` for the Chebyshev scheme, i.e.
/// `P(ν_p / n² ≤ x)`.
pub fn partial_sum(n: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("x must be positive, got {x}"));
    }
    let f = NuFamily::chebyshev();
    let order = ((n as f64).powi(2) * x).floor() as usize;
    Ok(expand_series(&f, &f.with_n(n)?, order)?.sum())
}

/// The curve `n ↦ S(n, x)` for `n_min..=n_max`.
pub fn figure1_curve(x: f64, n_min: u32, n_max: u32) -> Result<Vec<(u32, f64)>> {
    if n_min == 0 || n_min >= n_max {
        return domain(format!("need 1 ≤ n_min < n_max, got {n_min}..{n_max}"));
    }
    (n_min..=n_max).map(|n| Ok((n, partial_sum(n, x)?))).collect()
}

/// `S(n, x)` against `A(x)`: the curve settles (plateau gap between the
/// largest `n` and the one nearest half of it) and approaches `A(x)`. With
/// `mc`, `A` is also cross-checked against an empirical cdf of `ξ` draws
/// on `[0.1, 5]`.
pub fn run_theorem41(x: f64, ns: &[u32], mc: Option<McConfig>) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("theorem41");
    r.param("x", x).param("n", ns);
    if ns.is_empty() {
        return domain("theorem41 needs at least one n");
    }
    let xi = XiDist::new(1)?;
    let a = xi.cdf(x);
    r.info("A(x)", a);
    let mut curve = Vec::with_capacity(ns.len());
    for &n in ns {
        let s = partial_sum(n, x)?;
        r.info(format!("S(n={n})"), s);
        curve.push((n, s));
    }
    let &(n_max, s_max) = curve.iter().max_by_key(|(n, _)| *n).expect("nonempty");
    if let Some(&(n_half, s_half)) = curve
        .iter()
        .filter(|(n, _)| *n < n_max)
        .min_by_key(|(n, _)| (2 * *n as i64 - n_max as i64).abs())
    {
        r.metric(
            format!("plateau |S({n_max}) - S({n_half})|"),
            (s_max - s_half).abs(),
            Check::Below(tol::PLATEAU),
        );
    }
    r.metric(
        format!("|S({n_max}) - A(x)|"),
        (s_max - a).abs(),
        Check::Below(tol::LIMIT_GAP),
    );
    if let Some(mc) = mc {
        mc.record(&mut r);
        let draws = mc.draw(TAG_THEOREM41, 0, |rng| xi.sample(rng));
        let sample = EmpiricalSample::new(draws)?;
        let mut grid: Vec<f64> = (1..=50).map(|i| 0.1 * i as f64).collect();
        grid.push(x);
        let gap = grid
            .iter()
            .map(|&g| (xi.cdf(g) - sample.ecdf(g)).abs())
            .fold(0.0, f64::max);
        r.metric("sup |A - ecdf| on [0.1, 5]", gap, Check::AtMost(tol::CDF_CROSS_CHECK));
    }
    Ok(r.finish())
}

/// Fixed point of the stability relation with a closed-form cdf.
enum Target {
    Normal { sd: f64 },
    Laplace(LaplaceDist),
    Sech(SechDist),
    Mixture(NuStable),
}

impl Target {
    fn new(family: &NuFamily, alpha: f64, c: f64) -> Result<Self> {
        let m1 = family.m() == 1;
        Ok(match family.kind() {
            _ if alpha != 2.0 => Target::Mixture(NuStable::new(family, alpha, c)?),
            FamilyKind::Deterministic => Target::Normal { sd: (2.0 * c).sqrt() },
            FamilyKind::Geometric => Target::Laplace(LaplaceDist::new(c.sqrt())?),
            FamilyKind::Melamed if m1 => Target::Laplace(LaplaceDist::new(c.sqrt())?),
            FamilyKind::Chebyshev => Target::Sech(SechDist::new((2.0 * c).sqrt())?),
            FamilyKind::ChebyshevM if m1 => Target::Sech(SechDist::new((2.0 * c).sqrt())?),
            _ => Target::Mixture(NuStable::new(family, alpha, c)?),
        })
    }

    fn sample(&self, rng: &mut RngStream) -> f64 {
        match self {
            Target::Normal { sd } => {
                let z: f64 = StandardNormal.sample(rng);
                sd * z
            }
            Target::Laplace(d) => d.sample(rng),
            Target::Sech(d) => d.sample(rng),
            Target::Mixture(d) => d.sample(rng),
        }
    }

    fn cdf(&self) -> Option<Box<dyn Fn(f64) -> f64 + '_>> {
        match self {
            Target::Normal { sd } => Some(Box::new(move |x| {
                0.5 * (1.0 + statrs::function::erf::erf(x / (sd * std::f64::consts::SQRT_2)))
            })),
            Target::Laplace(d) => Some(Box::new(move |x| d.cdf(x))),
            Target::Sech(d) => Some(Box::new(move |x| d.cdf(x))),
            Target::Mixture(_) => None,
        }
    }
}

/// `p^{1/α} Σ_{j ≤ ν_p} X_j` with `X_j` drawn from the strictly ν-stable
/// law `φ(c|t|^α)` must have that same law. Compared by KS against the
/// closed-form cdf when there is one, else against an equally large direct
/// sample with the two-sample band.
pub fn run_stability(
    family: &NuFamily,
    alpha: f64,
    param: &Param,
    c: f64,
    mc: McConfig,
) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("stability");
    r.param("family", family.to_string())
        .param("alpha", alpha)
        .param("p", param.p())
        .param("c", c);
    mc.record(&mut r);
    let target = Target::new(family, alpha, c)?;
    let nu = NuSampler::new(family, param)?;
    let scale = param.p().powf(1.0 / alpha);
    let sums = mc.draw(TAG_STABILITY, 0, |rng| {
        let k = nu.sample(rng);
        scale * (0..k).map(|_| target.sample(rng)).sum::<f64>()
    });
    let sums = EmpiricalSample::new(sums)?.with_provenance(mc.seed, "stability random sums");
    match target.cdf() {
        Some(cdf) => {
            r.metric("ks", ks_statistic(&sums, cdf), Check::Below(tol::ks_band(mc.n)));
        }
        None => {
            let direct = EmpiricalSample::new(mc.draw(TAG_STABILITY, 1, |rng| target.sample(rng)))?;
            r.metric(
                "ks two-sample",
                ks_two_sample(&sums, &direct),
                Check::Below(tol::ks_band_two_sample(mc.n, mc.n)),
            );
        }
    }
    Ok(r.finish())
}

/// Law of large numbers for random sums. For lattice-valued schemes
/// `p ν_p` must approach the limit law `A` with KS decreasing along
/// `params` and below [`tol::LLN_FINAL_KS`] at the end. For the
/// deterministic scheme `p Σ X_j` with exponential `X_j` concentrates at 1.
pub fn run_lln(family: &NuFamily, params: &[Param], mc: McConfig) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("lln");
    r.param("family", family.to_string())
        .param("p", params.iter().map(Param::p).collect::<Vec<_>>());
    mc.record(&mut r);
    if params.is_empty() {
        return domain("lln needs at least one parameter");
    }
    let mut trail = Vec::with_capacity(params.len());
    if family.kind() == FamilyKind::Deterministic {
        for (i, p) in params.iter().enumerate() {
            let n = p.n().unwrap_or(1);
            let y = mc.draw(TAG_LLN, i as u32, |rng| {
                p.p() * (0..n).map(|_| -> f64 { Exp1.sample(rng) }).sum::<f64>()
            });
            let s = EmpiricalSample::new(y)?;
            r.info(format!("variance {}", label(p)), s.variance());
            trail.push(s.variance());
            if i + 1 == params.len() {
                let band = tol::SIGMA * (p.p() / mc.n as f64).sqrt();
                r.metric(
                    format!("|mean - 1| {}", label(p)),
                    (s.mean() - 1.0).abs(),
                    Check::AtMost(band),
                );
            }
        }
    } else {
        for (i, p) in params.iter().enumerate() {
            let nu = NuSampler::new(family, p)?;
            let y = mc.draw(TAG_LLN, i as u32, |rng| p.p() * nu.sample(rng) as f64);
            let s = EmpiricalSample::new(y)?;
            let ks = ks_statistic(&s, |x| family.limit_cdf(x));
            trail.push(ks);
            if i + 1 == params.len() {
                r.metric(format!("ks {}", label(p)), ks, Check::Below(tol::LLN_FINAL_KS));
            } else {
                r.info(format!("ks {}", label(p)), ks);
            }
        }
    }
    r.condition("decreasing", trail.windows(2).all(|w| w[1] < w[0]));
    Ok(r.finish())
}

/// Characterization checks for the Chebyshev scheme at `p = 1/n²`:
/// `ξ` solves `ξ = p Σ_{j≤ν} ξ_j`, the sech law solves
/// `X = p^{1/2} Σ_{j≤ν} X_j`, and an exponential candidate fails the first
/// relation.
pub fn run_characterization(n: u32, mc: McConfig) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("characterization");
    let family = NuFamily::chebyshev();
    let param = family.with_n(n)?;
    r.param("family", family.to_string()).param("n", n).param("p", param.p());
    mc.record(&mut r);
    let nu = NuSampler::new(&family, &param)?;
    let p = param.p();
    let xi = XiDist::new(1)?;

    let y = mc.draw(TAG_CHARACTERIZATION, 0, |rng| {
        let k = nu.sample(rng);
        p * (0..k).map(|_| xi.sample(rng)).sum::<f64>()
    });
    for t in [0.5, 1.0, 2.0] {
        r.metric(
            format!("xi transform z-score t={t}"),
            transform_z_score(&y, t, |s| family.phi_real(s)),
            Check::AtMost(tol::SIGMA),
        );
    }
    let ys = EmpiricalSample::new(y)?;
    r.metric("xi ks", ks_statistic(&ys, |x| xi.cdf(x)), Check::Below(tol::ks_band(mc.n)));

    let sech = SechDist::standard();
    let root_p = p.sqrt();
    let s = mc.draw(TAG_CHARACTERIZATION, 1, |rng| {
        let k = nu.sample(rng);
        root_p * (0..k).map(|_| sech.sample(rng)).sum::<f64>()
    });
    let s = EmpiricalSample::new(s)?;
    r.metric("sech ks", ks_statistic(&s, |x| sech.cdf(x)), Check::Below(tol::ks_band(mc.n)));

    let e = mc.draw(TAG_CHARACTERIZATION, 2, |rng| {
        let k = nu.sample(rng);
        p * (0..k).map(|_| -> f64 { Exp1.sample(rng) }).sum::<f64>()
    });
    let e = EmpiricalSample::new(e)?;
    r.metric(
        "exponential candidate ks",
        ks_statistic(&e, |x| -(-x.max(0.0)).exp_m1()),
        Check::Above(tol::WRONG_CANDIDATE_KS),
    );
    Ok(r.finish())
}

/// Probability tables of the Chebyshev scheme: no coefficient below the
/// rounding floor, total mass 1, mean `n²`, and geometric decay no faster
/// than `cos(π/(2n))`.
pub fn run_pgf_validity(ns: &[u32]) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("pgf-validity");
    r.param("n", ns);
    let f = NuFamily::chebyshev();
    let (mut min_coeff, mut mass_err, mut mean_err, mut rate_excess) =
        (f64::INFINITY, 0.0f64, 0.0f64, f64::NEG_INFINITY);
    let mut bracket_ok = true;
    for &n in ns {
        let param = f.with_n(n)?;
        let pmf = expand_pgf(&f, &param, None)?;
        let raw = expand_series(&f, &param, pmf.order())?;
        min_coeff = min_coeff.min(raw.coeffs().iter().copied().fold(f64::INFINITY, f64::min));
        let total = pmf.table_sum();
        mass_err = mass_err
            .max(total - 1.0)
            .max(1.0 - total - pmf.tail_mass());
        let n2 = (n as f64).powi(2);
        mean_err = mean_err.max((pmf.table_mean() - n2).abs() / n2);
        bracket_ok &= pmf.check().is_ok();
        if let Some(rate) = pmf.fitted_tail_rate() {
            rate_excess = rate_excess.max(rate - crate::chebyshev::largest_root(n));
        }
    }
    r.metric("min coefficient", min_coeff, Check::AtLeast(-tol::NEGATIVE_DUST))
        .metric("max mass error", mass_err, Check::AtMost(tol::MASS))
        .metric("max relative mean error", mean_err, Check::AtMost(tol::MEAN_RELATIVE))
        .metric("max fitted rate - cos(pi/2n)", rate_excess, Check::AtMost(1e-3))
        .condition("mean bracketed by table and tail bound", bracket_ok);
    Ok(r.finish())
}

/// Moments and Laplace transform of `ξ_m` from Karhunen–Loève draws.
pub fn run_xi_moments(m: u32, mc: McConfig) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("xi-moments");
    r.param("m", m);
    mc.record(&mut r);
    let xi = XiDist::new(m)?;
    r.param("kl_terms", xi.kl_terms());
    let v = mc.draw(TAG_XI, m, |rng| xi.sample(rng));
    let s = EmpiricalSample::new(v.clone())?;
    let var_target = xi.variance();
    let scale = (m as f64).sqrt();
    r.metric("|mean - 1|", (s.mean() - 1.0).abs(), Check::AtMost(tol::XI_MEAN * scale))
        .metric(
            "|variance - 2m/3|",
            (s.variance() - var_target).abs(),
            Check::AtMost(tol::XI_VARIANCE * m as f64),
        );
    for t in [0.5, 1.0, 2.0, 4.0] {
        r.metric(
            format!("transform z-score t={t}"),
            transform_z_score(&v, t, |u| xi.laplace_transform(u)),
            Check::AtMost(tol::SIGMA),
        );
    }
    Ok(r.finish())
}

/// `√ξ Z` is standard hyperbolic secant, and `E e^{−t²ξ} = 1/cosh(√2 t)`.
pub fn run_scale_mixture(mc: McConfig) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("scale-mixture");
    mc.record(&mut r);
    let xi = XiDist::new(1)?;
    let pairs = mc.draw(TAG_MIXTURE, 0, |rng| {
        let m = xi.sample(rng);
        let z: f64 = StandardNormal.sample(rng);
        (m, m.sqrt() * z)
    });
    let (mix, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let y = EmpiricalSample::new(y)?;
    let sech = SechDist::standard();
    r.metric("ks vs sech", ks_statistic(&y, |x| sech.cdf(x)), Check::Below(tol::ks_band(mc.n)));
    let worst = (0..=20)
        .map(|i| {
            let t = 0.25 * i as f64;
            let emp = mean(&mix.iter().map(|m| (-t * t * m).exp()).collect::<Vec<_>>());
            (emp - 1.0 / (2f64.sqrt() * t).cosh()).abs()
        })
        .fold(0.0, f64::max);
    r.metric("sup transform error on [0, 5]", worst, Check::AtMost(tol::MIXTURE_TRANSFORM));
    Ok(r.finish())
}

/// The two `m = 2` identities: `1/√(1+2t)` is the transform of `X²` for a
/// standard normal `X` (checked by inverting to the χ²₁ cdf), and
/// `cosh(√(4t))^{−1/2}` is the transform of `2∫₀¹W²`.
pub fn run_m2_identities(mc: McConfig) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("m2-identities");
    mc.record(&mut r);
    let mel = NuFamily::melamed(2)?;
    let mut worst = 0.0f64;
    for i in 0..=98 {
        let x = 0.1 + 0.05 * i as f64;
        let inv = gaver_stehfest(|t: f64| mel.phi_real(t) / t, x, DEFAULT_ORDER)?;
        let chi2 = statrs::function::erf::erf((x / 2.0).sqrt());
        worst = worst.max((inv - chi2).abs());
    }
    r.metric("sup |inversion - chi2_1 cdf|", worst, Check::AtMost(tol::INVERSION_CHI2));

    let w = WienerSquareIntegral::default();
    let v = mc.draw(TAG_M2, 0, |rng| w.sample(rng));
    let doubled: Vec<f64> = v.iter().map(|x| 2.0 * x).collect();
    let target = |t: f64| (4.0 * t).sqrt().cosh().powf(-0.5);
    for t in [0.5, 1.0, 2.0] {
        r.metric(
            format!("2*int W^2 z-score t={t}"),
            transform_z_score(&doubled, t, target),
            Check::AtMost(tol::SIGMA),
        );
        r.metric(
            format!("int W^2 z-score t={t}"),
            transform_z_score(&v, t, WienerSquareIntegral::laplace_transform),
            Check::AtMost(tol::SIGMA),
        );
    }
    Ok(r.finish())
}

/// Smallest Toeplitz eigenvalue of valid characteristic functions on a
/// 21-point grid over `[−5, 5]`, plus a non-positive-definite control.
pub fn run_pd_probes() -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("pd-probes");
    let grid: Vec<f64> = (0..21).map(|i| -5.0 + 0.5 * i as f64).collect();
    r.param("grid", (-5.0, 5.0, 21));
    let probe = |f: &dyn Fn(f64) -> f64| chf_positive_definiteness_probe(f, &grid);
    r.metric("1/cosh t", probe(&|t: f64| 1.0 / t.cosh()), Check::AtLeast(tol::PD_EIGENVALUE))
        .metric("1/(1+t^2)", probe(&|t: f64| 1.0 / (1.0 + t * t)), Check::AtLeast(tol::PD_EIGENVALUE))
        .metric(
            "(cosh t)^(-1/2)",
            probe(&|t: f64| t.cosh().powf(-0.5)),
            Check::AtLeast(tol::PD_EIGENVALUE),
        )
        .metric(
            "control max(0, 1-t^4)",
            probe(&|t: f64| (1.0 - t.powi(4)).max(0.0)),
            Check::Below(tol::PD_EIGENVALUE),
        );
    Ok(r.finish())
}
