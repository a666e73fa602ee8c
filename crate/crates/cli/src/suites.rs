//! Verification suites behind `vandal verify`: randomized property sweeps
//! over the spectral pipeline, the localizing function, and the
//! theorem-level bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use vandal_core::bounds::{
    cluster_specialization_bound, ingham_bound, kernel_bound, separated_bounds, small_r_bound,
    BoundReport,
};
use vandal_core::localizer::{
    h_rule_of_p, poisson_check, psi_at_zero, psi_eval, psi_hat, psi_hat_zero, ratio_closed_form,
    PsiParams,
};
use vandal_core::torus_nodes::{gen_equispaced, gen_quasi_grid, gen_random_separated, NodeSet};
use vandal_core::vandermonde::{spectrum, spectrum_explicit};
use vandal_core::{Complex64, VandermondeSpec};

const PI: f64 = std::f64::consts::PI;

/// Outcome of one verification suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: usize,
    pub violations: usize,
    /// Suite-specific worst observed margin: largest relative error for
    /// agreement suites, smallest relative slack for soundness suites.
    pub worst_margin: f64,
    /// Serialized offending instances, for replay.
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str, tighter_is_worse: bool) -> Self {
        SuiteReport {
            suite: name.to_string(),
            checks: 0,
            violations: 0,
            worst_margin: if tighter_is_worse { f64::INFINITY } else { 0.0 },
            failures: Vec::new(),
        }
    }

    fn record_error(&mut self, rel_err: f64, limit: f64, context: impl Fn() -> String) {
        self.checks += 1;
        self.worst_margin = self.worst_margin.max(rel_err);
        if !(rel_err <= limit) {
            self.violations += 1;
            self.failures.push(context());
        }
    }

    fn record_slack(&mut self, slack: f64, limit: f64, context: impl Fn() -> String) {
        self.checks += 1;
        self.worst_margin = self.worst_margin.min(slack);
        if !(slack >= limit) {
            self.violations += 1;
            self.failures.push(context());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Random wide (M ≤ N^d) well-separated instances.
fn random_instances(count: usize, seed: u64) -> Vec<VandermondeSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d = rng.gen_range(1..=3usize);
        let n = rng.gen_range(2..=8usize);
        let m = rng.gen_range(2..=10usize.min(n.pow(d as u32)));
        let q_target = match d {
            1 => rng.gen_range(0.02..0.4_f64.min(0.5 / m as f64)),
            2 => rng.gen_range(0.05..0.2),
            _ => rng.gen_range(0.1..0.25),
        };
        let node_seed = rng.gen::<u64>();
        let Ok(ns) = gen_random_separated(m, d, q_target, node_seed) else {
            continue;
        };
        out.push(VandermondeSpec::new(ns, n).unwrap());
    }
    out
}

fn describe(spec: &VandermondeSpec, detail: &str) -> String {
    format!(
        "{{\"n\":{},\"d\":{},\"m\":{},\"nodes\":{},\"detail\":\"{}\"}}",
        spec.degree(),
        spec.node_set().dim(),
        spec.node_set().len(),
        spec.node_set().to_json(),
        detail
    )
}

/// Dual-path agreement, equispaced closed forms, and quasi-grid perfect
/// conditioning.
pub fn spectral_suite(instances: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("spectral", false);

    for spec in random_instances(instances, seed) {
        let gram = spectrum(&spec).unwrap();
        let explicit = spectrum_explicit(&spec, 10_000_000).unwrap();
        let err = rel(gram.sigma_max, explicit.sigma_max).max(rel(gram.sigma_min, explicit.sigma_min));
        report.record_error(err, 1e-8, || describe(&spec, "dual-path disagreement"));
    }

    for d in 1..=3usize {
        for m in 2..=6usize {
            for n in m..=12usize {
                let ns = gen_equispaced(m, d).unwrap();
                let spec = VandermondeSpec::new(ns, n).unwrap();
                let s = spectrum(&spec).unwrap();
                let (lo, hi) = vandal_core::bounds::equispaced_exact(n, m, d).unwrap();
                let err = rel(s.sigma_min, lo).max(rel(s.sigma_max, hi));
                report.record_error(err, 1e-10, || describe(&spec, "equispaced closed form"));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51ec7a1);
    for _ in 0..instances.min(20) {
        let n = rng.gen_range(3..=5usize);
        let d = rng.gen_range(2..=3usize);
        let layout_seed = rng.gen::<u64>();
        let ns = gen_quasi_grid(n, d, layout_seed).unwrap();
        let spec = VandermondeSpec::new(ns, n).unwrap();
        let s = spectrum(&spec).unwrap();
        report.record_error((s.cond - 1.0).abs(), 1e-10, || {
            describe(&spec, "quasi-grid conditioning")
        });
    }

    report
}

/// Closed forms of ψ and ψ̂ at zero against independent evaluation, the
/// sign pattern of ψ̂, and the Poisson-summation identity.
pub fn psi_suite(samples: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("psi", false);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for r in 1..=3usize {
        for d in 1..=4usize {
            let b = 6.0;
            let rule = h_rule_of_p(d, r, b);
            for h in [rule, 0.8 * rule] {
                let params = PsiParams::new(d, r, b, h).unwrap();
                let ctx = |what: &str| format!("{{\"r\":{r},\"d\":{d},\"b\":{b},\"h\":{h},\"detail\":\"{what}\"}}");

                let origin = vec![0.0; d];
                let err = rel(psi_eval(&origin, &params).unwrap(), psi_at_zero(&params));
                report.record_error(err, 1e-9, || ctx("psi(0) closed form"));

                let err = rel(psi_hat(&origin, &params).unwrap(), psi_hat_zero(&params));
                report.record_error(err, 1e-9, || ctx("psi_hat(0) closed form"));

                let err = rel(
                    ratio_closed_form(&params),
                    psi_at_zero(&params) / psi_hat_zero(&params),
                );
                report.record_error(err, 1e-9, || ctx("ratio closed form"));

                // sign of psi_hat is the sign of (2πb)^p − Σ (2πv_s)^p
                let p = params.p() as i32;
                let peak = psi_hat_zero(&params).abs();
                let mut sign_errors = 0usize;
                for _ in 0..samples {
                    let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.5 * b..1.5 * b)).collect();
                    let head = (2.0 * PI * b).powi(p)
                        - v.iter().map(|&vs| (2.0 * PI * vs).powi(p)).sum::<f64>();
                    let val = psi_hat(&v, &params).unwrap();
                    if val.abs() <= 1e-12 * peak || head.abs() <= 1e-12 * (2.0 * PI * b).powi(p) {
                        continue;
                    }
                    if (val > 0.0) != (head > 0.0) {
                        sign_errors += 1;
                    }
                }
                report.record_error(sign_errors as f64, 0.5, || ctx("psi_hat sign pattern"));
            }
        }
    }

    // Poisson-summation identity on concrete instances
    let poisson_cases: [(NodeSet, usize, f64, Vec<usize>); 2] = [
        (
            NodeSet::new(1, vec![vec![0.3]]).unwrap(),
            8,
            0.45,
            vec![50, 100, 200],
        ),
        (
            NodeSet::new(2, vec![vec![0.1, 0.2], vec![0.6, 0.7]]).unwrap(),
            6,
            0.4,
            vec![4, 8, 16],
        ),
    ];
    for (ns, n, h, truncations) in poisson_cases {
        let d = ns.dim();
        let m = ns.len();
        let spec = VandermondeSpec::new(ns, n).unwrap();
        let params = PsiParams::new(d, 1, (n as f64 - 1.0) / 2.0, h).unwrap();
        let u: Vec<Complex64> = (0..m)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let scale = psi_at_zero(&params).abs().max(1.0);
        let mut gaps = Vec::new();
        for &t in &truncations {
            let diag = poisson_check(&spec, &params, &u, t).unwrap();
            report.record_error(rel(diag.mid, diag.rhs), 1e-10, || {
                describe(&spec, "poisson mid vs rhs")
            });
            gaps.push((diag.lhs - diag.mid).abs() / scale);
        }
        let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
        report.record_error(if monotone { 0.0 } else { 1.0 }, 0.5, || {
            describe(&spec, &format!("poisson truncation gaps not decreasing: {gaps:?}"))
        });
    }

    report
}

/// One theorem of the soundness sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoundnessCase {
    SeparatedD1,
    Ingham,
    SmallR(usize),
    Cluster,
    Kernel,
}

impl SoundnessCase {
    pub const ALL: [SoundnessCase; 7] = [
        SoundnessCase::SeparatedD1,
        SoundnessCase::Ingham,
        SoundnessCase::SmallR(1),
        SoundnessCase::SmallR(2),
        SoundnessCase::SmallR(3),
        SoundnessCase::Cluster,
        SoundnessCase::Kernel,
    ];

    fn name(&self) -> String {
        match self {
            SoundnessCase::SeparatedD1 => "separated_d1".into(),
            SoundnessCase::Ingham => "ingham".into(),
            SoundnessCase::SmallR(r) => format!("small_r r={r}"),
            SoundnessCase::Cluster => "cluster_specialization".into(),
            SoundnessCase::Kernel => "kernel".into(),
        }
    }
}

/// Generate one node set satisfying the case's hypothesis, together with
/// the applicable lower-bound report for it.
pub fn soundness_instance(
    case: SoundnessCase,
    rng: &mut ChaCha8Rng,
) -> Option<(VandermondeSpec, BoundReport)> {
    let (d, n, q_lo) = match case {
        SoundnessCase::SeparatedD1 => {
            let n = rng.gen_range(4..=64usize);
            (1usize, n, 1.05 / n as f64)
        }
        SoundnessCase::Ingham => {
            let d = rng.gen_range(1..=3usize);
            let n = rng.gen_range(16..=64usize);
            (d, n, vandal_core::bounds::ingham_threshold(d) / (n as f64 - 1.0))
        }
        SoundnessCase::SmallR(r) => {
            let d = rng.gen_range(1..=3usize);
            let n = rng.gen_range(8..=64usize);
            let (threshold, _) = vandal_core::bounds::small_r_constants(r, d).unwrap();
            (d, n, threshold / (n as f64 - 1.0))
        }
        SoundnessCase::Cluster => {
            let d = rng.gen_range(1..=3usize);
            let n_min = (2 * (d + 2) * (d + 2) + 1).max(19);
            let n = rng.gen_range(n_min..=64usize);
            (d, n, 6.0 * d as f64 / n as f64 * 1.02)
        }
        SoundnessCase::Kernel => {
            let d = rng.gen_range(2..=3usize);
            let n_min = if d == 2 { 18 } else { 28 };
            let n = 2 * rng.gen_range(n_min / 2..=32usize);
            (d, n, 4.0 * d as f64 / n as f64 * 1.02)
        }
    };
    if q_lo > 0.45 {
        return None;
    }
    let q_target = (q_lo * rng.gen_range(1.0..1.25)).min(0.45);
    let density_cap = (0.5 / q_target.powi(d as i32)).floor() as usize;
    let m_max = 12.min(density_cap).min(n.pow(d as u32));
    if m_max < 2 {
        return None;
    }
    let m = rng.gen_range(2..=m_max);
    let ns = gen_random_separated(m, d, q_target, rng.gen::<u64>()).ok()?;
    let q = ns.separation().unwrap();
    let report = match case {
        SoundnessCase::SeparatedD1 => separated_bounds(n, q, d).unwrap().0,
        SoundnessCase::Ingham => ingham_bound(n, q, d).unwrap(),
        SoundnessCase::SmallR(r) => small_r_bound(n, q, d, r).unwrap(),
        SoundnessCase::Cluster => cluster_specialization_bound(n, q, d, m),
        SoundnessCase::Kernel => kernel_bound(n, q, d).unwrap().0,
    };
    if !report.applicable {
        return None;
    }
    Some((VandermondeSpec::new(ns, n).unwrap(), report))
}

/// Soundness sweep: for hypothesis-satisfying random instances, the
/// computed σ_min never falls below the claimed lower bound.
pub fn bounds_suite(instances_per_theorem: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("bounds", true);
    for (c, case) in SoundnessCase::ALL.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(c as u64));
        let mut done = 0usize;
        while done < instances_per_theorem {
            let Some((spec, bound_report)) = soundness_instance(*case, &mut rng) else {
                continue;
            };
            let bound = bound_report.bound.unwrap();
            let s = spectrum(&spec).unwrap();
            let slack = s.sigma_min / bound - 1.0;
            report.record_slack(slack, -1e-9, || {
                describe(
                    &spec,
                    &format!(
                        "{}: sigma_min {} below bound {}",
                        case.name(),
                        s.sigma_min,
                        bound
                    ),
                )
            });
            done += 1;
        }
    }
    report
}
