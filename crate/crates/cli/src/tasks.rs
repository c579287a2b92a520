//! One function per task; each returns the report body and its checks.

use openness::asymptotics::{dk_asymptote_report, jm_asymptote_report, jm_lhs_mc, BoundSeries, Extrapolation};
use openness::kernel::{classical_bergman, effective_p_report, kernel_inv, McConfig};
use openness::rational::{self, frac, int};
use openness::scalars::{q_analysis, theta_bound_check, theta_eval, theta_invert, theta_invert_excess, SHARP_Q_BOUND};
use openness::toric::{weighted_norm_sq, Coefficient, ExponentVector, MonomialWeight, PolyFunction};
use openness::verify::{known_discrepancies, run_suite, Suite};
use openness::weights::{
    a_factor, a_factor_jm, a_factor_jm_sampled, a_factor_sampled, chain_audit, delta_residuals, plain_residuals,
    OdeReport,
};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::report::{
    closed, closed_scaled, exact, exact_ext, exact_rational, measured, Check, DiscrepancyNote, Report,
};
use crate::spec::{Problem, ProblemSpec, SuiteName, Task};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLES: usize = 100_000;

pub fn run(spec: &ProblemSpec) -> Result<Report, CliError> {
    let (results, checks, notes) = match spec.task {
        Task::Theta => theta(spec)?,
        Task::Kernel => kernel(spec, &spec.problem()?)?,
        Task::EffectiveP => effective_p(&spec.problem()?)?,
        Task::Dk => dk(spec, &spec.problem()?)?,
        Task::Jm => jm(spec, &spec.problem()?)?,
        Task::Ode => ode(spec)?,
        Task::Audit => audit(spec)?,
        Task::VerifyAll => verify_all(spec),
    };
    Ok(Report::new(spec, results, checks, notes))
}

type Body = (Value, Vec<Check>, Vec<DiscrepancyNote>);

fn ulps(x: f64) -> f64 {
    4.0 * f64::EPSILON * x.abs()
}

fn theta(spec: &ProblemSpec) -> Result<Body, CliError> {
    let ts = spec.params.t.clone().unwrap_or_else(|| vec!["3/2".into(), "2".into()]);
    let mut points = Vec::new();
    let mut floats = Vec::new();
    for (i, s) in ts.iter().enumerate() {
        let t = rational::parse(s).map_err(|e| CliError::Input(format!("params.t[{i}]: {e}")))?;
        let tf = rational::to_f64(&t);
        let v = theta_eval(tf)?;
        // θ(3/2) = 1 is the only rational value on the inversion interval we mark exact
        let value = if t == frac(3, 2) {
            exact_rational(&int(1))
        } else {
            measured(v, ulps(v))
        };
        points.push(json!({ "t": exact_rational(&t), "theta": value }));
        floats.push(tf);
    }
    let mut checks = Vec::new();
    let chain = theta_bound_check(&floats)?;
    checks.push(Check::new(
        "inequality-chain",
        chain.all_hold(),
        format!("min slack {:.3e} over {} points", chain.min_slack(), chain.points),
    ));
    let mut inversions = Vec::new();
    for &r in spec.params.ratio.as_deref().unwrap_or(&[]) {
        let p = theta_invert(r)?;
        let s = theta_invert_excess(r)?;
        let back = theta_eval(p)?;
        let tol = 1e-10 + f64::EPSILON * r;
        checks.push(Check::new(
            format!("round-trip {r}"),
            (back - r).abs() <= tol * r,
            format!("theta(p) = {back}"),
        ));
        inversions
            .push(json!({ "ratio": measured(r, 0.0), "p": measured(p, ulps(p)), "p_minus_one": measured(s, ulps(s)) }));
    }
    let qa = q_analysis(1e-12)?;
    checks.push(Check::new(
        "q-minimum",
        qa.above_sharp_bound && qa.above_coarse_bound && qa.below_half_value,
        format!("min e^Q = {:.10} > {SHARP_Q_BOUND}", qa.exp_q_min),
    ));
    let results = json!({
        "points": points,
        "inversions": inversions,
        "q_min": { "x": measured(qa.x_min, 1e-12), "exp_q": measured(qa.exp_q_min, 1e-12) },
        "inequalities": chain.rows.iter().map(|row| json!({
            "name": row.name,
            "min_slack": closed(row.min_slack),
            "argmin_t": measured(row.argmin_t, 0.0),
            "violations": row.violations,
        })).collect::<Vec<_>>(),
    });
    Ok((results, checks, vec![]))
}

fn third_example() -> (PolyFunction, MonomialWeight) {
    let f = PolyFunction::zero(2)
        .with_term([1, 0], Coefficient::one())
        .and_then(|f| f.with_term([0, 2], Coefficient::one()))
        .expect("valid example");
    (f, MonomialWeight::from_ints(&[1, 0]).expect("valid example"))
}

fn supports(v: &[ExponentVector]) -> Value {
    json!(v.iter().map(|e| e.entries().to_vec()).collect::<Vec<_>>())
}

fn kernel(_spec: &ProblemSpec, p: &Problem) -> Result<Body, CliError> {
    let k = kernel_inv(&p.f, &p.weight)?;
    let c1 = weighted_norm_sq(&p.f, &p.weight, &int(1))?;
    let plain = weighted_norm_sq(&p.f, &p.weight, &int(0))?;
    let n = p.weight.dim();
    let bergman = classical_bergman(n, &vec![Default::default(); n])?;
    let checks = vec![Check::new(
        "kernel-ordering",
        k.k_inv <= plain && plain <= c1,
        format!("K^-1 = {} <= |F|^2_0 = {plain} <= C1 = {c1}", k.k_inv),
    )];
    let results = json!({
        "k_inv": exact(&k.k_inv),
        "kernel": exact(&k.kernel()),
        "jumping_number": exact_ext(&k.jumping),
        "constraint_ideal": supports(k.ideal.generators()),
        "projected_support": supports(&k.projected_support),
        "unweighted_norm": exact(&plain),
        "c1": exact(&c1),
        "classical_bergman": exact(&bergman),
    });
    let (f3, a3) = third_example();
    let notes = if p.f == f3 && p.weight == a3 {
        known_discrepancies()
            .iter()
            .filter(|d| d.computed == "3/pi^2")
            .map(DiscrepancyNote::from)
            .collect()
    } else {
        vec![]
    };
    Ok((results, checks, notes))
}

fn effective_p(p: &Problem) -> Result<Body, CliError> {
    let r = effective_p_report(&p.f, &p.weight)?;
    let back = theta_eval(r.p_effective)?;
    let checks = vec![
        Check::new(
            "membership",
            r.membership_verdict,
            format!("F in I(p phi) at p = {}", r.membership_p),
        ),
        Check::new(
            "inversion",
            (back - r.ratio).abs() <= (1e-10 + f64::EPSILON * r.ratio) * r.ratio,
            format!("theta(p_effective) = {back}"),
        ),
        Check::new(
            "beats-linear-exponent",
            r.p_effective > r.berndtsson_p,
            format!("{} > {}", r.p_effective, r.berndtsson_p),
        ),
    ];
    let results = json!({
        "c1": exact(&r.c1),
        "c2": exact(&r.c2),
        "ratio": closed(r.ratio),
        "ratio_exact": exact_rational(&r.ratio_exact),
        "p_effective": measured(r.p_effective, ulps(r.p_effective)),
        "membership": { "p": measured(r.membership_p, ulps(r.membership_p)), "verdict": r.membership_verdict },
        "berndtsson_p": closed(r.berndtsson_p),
        "jumping_number": exact_ext(&r.kernel.jumping),
    });
    Ok((results, checks, vec![]))
}

fn extrapolation(e: &Extrapolation) -> Value {
    match e {
        Extrapolation::Value(v) => json!({ "kind": "value", "value": measured(*v, 1e-6 * v.abs()) }),
        Extrapolation::Divergent => json!({ "kind": "divergent" }),
        Extrapolation::Unavailable => json!({ "kind": "unavailable" }),
    }
}

fn series(s: &BoundSeries) -> Value {
    json!({
        "name": s.name,
        "hypothesis_ok": s.hypothesis_ok,
        "rows": s.rows.iter().map(|(r, v)| json!({ "R": measured(*r, 0.0), "value": closed(*v) })).collect::<Vec<_>>(),
        "liminf_estimate": closed(s.liminf_estimate),
        "tail_points": s.tail_points,
        "extrapolation": extrapolation(&s.extrapolation),
        "lower_bound": exact(&s.lower_bound),
        "slack": closed_scaled(s.slack, s.lower_bound.to_f64()),
        "holds": s.holds(),
    })
}

fn default_r_grid() -> Vec<f64> {
    (0..=10).map(|i| 10.0 + 2.0 * f64::from(i)).collect()
}

fn dk(spec: &ProblemSpec, p: &Problem) -> Result<Body, CliError> {
    let grid = spec.params.r_grid.clone().unwrap_or_else(default_r_grid);
    let b0 = spec.params.b0.unwrap_or(1.0);
    let rep = dk_asymptote_report(&p.f, &p.weight, &grid, b0)?;
    let mut all = vec![&rep.band, &rep.sublevel];
    all.extend(rep.dk_form.as_ref());
    let checks = all
        .iter()
        .map(|s| {
            Check::new(
                format!("{}-bound", s.name),
                s.holds(),
                if s.hypothesis_ok {
                    format!("liminf {:.12} vs {}", s.liminf_estimate, s.lower_bound)
                } else {
                    "hypothesis fails; bound is vacuous".to_string()
                },
            )
        })
        .collect();
    let results = json!({
        "b0": measured(b0, 0.0),
        "c_k": exact_ext(&rep.c_k),
        "classical_bound": exact(&rep.classical_bound),
        "series": all.iter().map(|s| series(s)).collect::<Vec<_>>(),
    });
    Ok((results, checks, vec![]))
}

fn jm(spec: &ProblemSpec, p: &Problem) -> Result<Body, CliError> {
    let grid = spec.params.r_grid.clone().unwrap_or_else(default_r_grid);
    let deltas = spec.params.delta.clone().unwrap_or_else(|| (1..=10).collect());
    let notes: Vec<DiscrepancyNote> = if p.weight == MonomialWeight::from_ints(&[1])? && p.f == PolyFunction::one(1) {
        known_discrepancies()
            .iter()
            .filter(|d| d.reference == "1/pi")
            .map(DiscrepancyNote::from)
            .collect()
    } else {
        vec![]
    };
    match jm_asymptote_report(&p.f, &p.weight, &deltas, &grid) {
        Ok(rep) => {
            let checks = vec![Check::new(
                "jm-bound",
                rep.holds(),
                if rep.hypothesis_ok {
                    format!(
                        "liminf {:.12} vs sup {:.12} at delta = {}",
                        rep.liminf_estimate, rep.rhs, rep.rhs_argmax_delta
                    )
                } else {
                    "hypothesis fails; bound is vacuous".to_string()
                },
            )];
            let results = json!({
                "method": "exact",
                "c": exact_rational(&rep.c),
                "normalized_weight": rep.normalized.iter().map(rational::render).collect::<Vec<_>>(),
                "hypothesis_ok": rep.hypothesis_ok,
                "lhs_rows": rep.lhs_rows.iter().map(|(big_r, r, v)| json!({
                    "R": measured(*big_r, 0.0), "r": closed(*r), "value": closed(*v),
                })).collect::<Vec<_>>(),
                "liminf_estimate": closed(rep.liminf_estimate),
                "extrapolation": extrapolation(&rep.extrapolation),
                "deltas": rep.deltas.iter().map(|d| json!({
                    "delta": d.delta,
                    "k_inv": exact(&d.k_inv),
                    "k_inv_quadrature": measured(d.k_inv_quadrature, 1e-9 * d.k_inv_quadrature.abs()),
                    "piecewise_jumping": closed(d.piecewise_jumping),
                    "outside_ideal": d.outside_ideal,
                    "c_delta": closed(d.c_delta),
                    "rhs_term": closed(d.rhs_term),
                })).collect::<Vec<_>>(),
                "rhs": closed(rep.rhs),
                "rhs_argmax_delta": rep.rhs_argmax_delta,
                "slack": closed_scaled(rep.slack, rep.rhs),
            });
            Ok((results, checks, notes))
        }
        Err(openness::Error::Unsupported(why)) => {
            let config = McConfig::new(
                spec.params.samples.unwrap_or(DEFAULT_SAMPLES),
                spec.params.seed.unwrap_or(DEFAULT_SEED),
            );
            let rows = grid
                .iter()
                .map(|&r| {
                    jm_lhs_mc(&p.f, &p.weight, r, &config)
                        .map(|e| json!({ "R": measured(r, 0.0), "value": measured(e.mean, 4.0 * e.std_error) }))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let results = json!({
                "method": "monte-carlo",
                "reason": why,
                "samples": config.samples,
                "seed": config.seed,
                "lhs_rows": rows,
            });
            Ok((results, vec![], notes))
        }
        Err(e) => Err(e.into()),
    }
}

fn ode_json(r: &OdeReport) -> Value {
    json!({
        "delta": r.witness.delta,
        "points": r.points,
        "max_residual_first": measured(r.max_residual_first, 0.0),
        "max_residual_second": measured(r.max_residual_second, 0.0),
        "min_margin": closed(r.min_margin),
        "min_s_excess": closed(r.min_s_excess),
        "max_u1": closed(r.max_u1),
        "max_fd_error": measured(r.max_fd_error, 0.0),
    })
}

fn ode_check(r: &OdeReport) -> Check {
    let ok = r.max_residual_first < 1e-10
        && r.max_residual_second < 1e-10
        && r.min_margin > 0.0
        && r.min_s_excess >= 0.0
        && r.max_u1 <= 0.0
        && r.max_fd_error <= 1.0;
    let name = match r.witness.delta {
        None => "witness".to_string(),
        Some(d) => format!("witness delta = {d}"),
    };
    Check::new(
        name,
        ok,
        format!("residuals {:.1e}, {:.1e}", r.max_residual_first, r.max_residual_second),
    )
}

fn ode(spec: &ProblemSpec) -> Result<Body, CliError> {
    let grid: Vec<f64> = (0..200).map(|i| 0.1 + 49.9 * f64::from(i) / 199.0).collect();
    let deltas = spec.params.delta.clone().unwrap_or_else(|| vec![1, 2, 5, 10]);
    let t0 = spec.params.t0.unwrap_or(1.0);
    let b0 = spec.params.b0.unwrap_or(1.0);
    let mut reports = vec![plain_residuals(&grid)?];
    for &d in &deltas {
        reports.push(delta_residuals(&grid, d)?);
    }
    let mut checks: Vec<Check> = reports.iter().map(ode_check).collect();
    let fa = a_factor(t0, b0)?;
    let fs = a_factor_sampled(t0, b0, 10_000)?;
    checks.push(Check::new(
        "factor",
        (fa - fs).abs() <= 1e-12,
        format!("{fa} vs sampled {fs}"),
    ));
    let mut jm_factors = Vec::new();
    for &d in &deltas {
        let k = a_factor_jm(d)?;
        let ks = a_factor_jm_sampled(d, 1.0 + 1.0 / f64::from(d), 10_000)?;
        checks.push(Check::new(
            format!("factor delta = {d}"),
            (k - ks).abs() <= 1e-12,
            format!("{k} vs sampled {ks}"),
        ));
        jm_factors.push(
            json!({ "delta": d, "factor": exact_rational(&(int(1) + frac(1, i64::from(d)))), "sampled": closed(ks) }),
        );
    }
    let results = json!({
        "systems": reports.iter().map(ode_json).collect::<Vec<_>>(),
        "factor": { "t0": measured(t0, 0.0), "b0": measured(b0, 0.0), "value": closed(fa), "sampled": closed(fs) },
        "delta_factors": jm_factors,
    });
    Ok((results, checks, vec![]))
}

fn audit(spec: &ProblemSpec) -> Result<Body, CliError> {
    let m = spec.params.m.unwrap_or(3);
    let b0s = spec
        .params
        .b0_list
        .clone()
        .or_else(|| spec.params.b0.map(|b| vec![b]))
        .unwrap_or_else(|| (0..=6).map(|i| 0.5f64.powi(i)).collect());
    let rep = chain_audit(m, &b0s)?;
    let mut checks = vec![Check::new(
        "chain",
        rep.all_hold(),
        format!(
            "identity {}, monotone {}, sums <= C1 {}, theta(p) = {:.6} <= {:.6}",
            rep.identity_holds,
            rep.monotone,
            rep.sums_below_c1,
            rep.theta_p,
            rep.c1 / rep.c2
        ),
    )];
    if let Some(gap) = rep.richardson_gap {
        checks.push(Check::new(
            "extrapolated-limit",
            gap.abs() <= 1e-6,
            format!("gap {gap:.2e}"),
        ));
    }
    let results = json!({
        "m": m,
        "p": exact_rational(&rep.p),
        "c1": exact(&openness::toric::PiScaled::pi_pow(1)),
        "c2": exact(&openness::toric::PiScaled::new(frac(1, i64::from(m) + 1), 1)),
        "limit": closed(rep.limit),
        "rows": rep.rows.iter().map(|r| json!({
            "b0": measured(r.b0, 0.0),
            "k0": r.k0,
            "direct_sum": measured(r.direct_sum, 1e-12 * r.direct_sum.abs()),
            "geometric_sum": closed(r.geometric_sum),
            "envelope": closed(r.envelope),
            "gap_envelope": closed_scaled(r.gap_envelope, rep.limit),
            "gap_sum": closed_scaled(r.gap_sum, rep.limit),
        })).collect::<Vec<_>>(),
        "richardson": rep.richardson.map(|v| measured(v, 1e-9)),
        "monotone": rep.monotone,
        "identity_holds": rep.identity_holds,
        "theta_p": closed(rep.theta_p),
        "theta_bound_holds": rep.theta_bound_holds,
    });
    Ok((results, checks, vec![]))
}

fn verify_all(spec: &ProblemSpec) -> Body {
    let suite = match spec.params.suite.unwrap_or(SuiteName::Fast) {
        SuiteName::Fast => Suite::Fast,
        SuiteName::Full => Suite::Full,
    };
    let results = run_suite(suite, spec.params.seed.unwrap_or(DEFAULT_SEED));
    let checks = results
        .iter()
        .map(|r| Check::new(format!("criterion {}: {}", r.id, r.name), r.passed, r.detail.clone()))
        .collect();
    let body = json!({
        "criteria": results.iter().map(|r| json!({ "id": r.id, "name": r.name, "passed": r.passed })).collect::<Vec<_>>(),
    });
    (
        body,
        checks,
        known_discrepancies().iter().map(DiscrepancyNote::from).collect(),
    )
}
