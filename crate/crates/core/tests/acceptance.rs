//! Acceptance criteria. Run with `cargo test --test acceptance`; prints
//! one PASS/FAIL line per criterion and fails if any criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::{Duration, Instant};

use gcslab_core::classifier::{
    classify_field_cs_ratios, classify_field_gcs_ratios, critical_time_free, critical_time_free_cs, critical_time_vi,
    physical_conditions_report, ConditionLabel, RatioSet, Regime, SemiclassicalInput,
};
use gcslab_core::dynamics::{si, FieldParams, PhysicalSetup, SeedCoefficients};
use gcslab_core::oracle::{
    l2_distance, propagate, quadrature_moments, schrodinger_residual, schrodinger_residual_with, verification_grid,
    PhaseVariant, SpatialGrid, WavefunctionSample,
};
use gcslab_core::roots::brute_force_crossing;
use gcslab_core::states::{cs_specialize, GcsState};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_seed(rng: &mut ChaCha8Rng) -> SeedCoefficients {
    let f0 = Complex64::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(-PI..PI));
    SeedCoefficients::from_f0(f0, rng.gen_range(-2.0..2.0)).unwrap()
}

fn random_zeta(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.gen_range(0.0..2.0), rng.gen_range(-PI..PI))
}

fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
}

fn max_ratio_on(r: &RatioSet, lo: f64, hi: f64) -> f64 {
    log_grid(lo, hi, 10_000)
        .map(|s| r.ratio_at(s).unwrap())
        .fold(f64::NEG_INFINITY, f64::max)
}

fn robertson_schrodinger() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut largest_product: f64 = 0.0;
    for _ in 0..1000 {
        let field = FieldParams::new(rng.gen_range(0.0..2.0), rng.gen_range(0.0..FRAC_PI_2));
        let state = GcsState::new(random_seed(&mut rng), field, random_zeta(&mut rng)).unwrap();
        let m = state.moments(rng.gen_range(0.0..10.0));
        worst = worst.max(m.rs_residual().abs());
        largest_product = largest_product.max(m.sigma_q * m.sigma_p);
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-12 && elapsed < Duration::from_secs(1),
        format!("1000 states, max |RS residual| = {worst:.2e} (largest σqσp {largest_product:.1}), {elapsed:.2?}"),
    )
}

fn schrodinger_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cases: Vec<GcsState> = (0..20)
        .map(|k| {
            let alpha = [0.0, FRAC_PI_4, FRAC_PI_2][k % 3];
            let field = FieldParams::new(rng.gen_range(0.0..2.0), alpha);
            GcsState::new(random_seed(&mut rng), field, random_zeta(&mut rng)).unwrap()
        })
        .collect();
    let distances: Vec<Result<f64, String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = cases
            .iter()
            .map(|state| {
                scope.spawn(move || -> Result<f64, String> {
                    let grid = verification_grid(state, 0.5, SpatialGrid::verification_default())
                        .map_err(|e| e.to_string())?;
                    let initial = WavefunctionSample::from_state(state, grid, 0.0).map_err(|e| e.to_string())?;
                    let run = propagate(&initial, state.field(), 0.5, 1e-4).map_err(|e| e.to_string())?;
                    let exact = WavefunctionSample::from_state(state, grid, 0.5).map_err(|e| e.to_string())?;
                    l2_distance(&run.sample, &exact, false).map_err(|e| e.to_string())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let elapsed = start.elapsed();
    let mut worst: f64 = 0.0;
    for d in &distances {
        match d {
            Ok(d) => worst = worst.max(*d),
            Err(e) => return outcome(false, format!("oracle run failed: {e}")),
        }
    }
    outcome(
        worst < 1e-5 && elapsed < Duration::from_secs(120),
        format!("20 cases, max L2 distance = {worst:.2e}, {elapsed:.2?}"),
    )
}

fn free_exact_solution() -> Outcome {
    let state = GcsState::new(
        cs_specialize(1.0 / 2f64.sqrt()).unwrap(),
        FieldParams::free(),
        Complex64::new(0.0, 0.0),
    )
    .unwrap();
    let grid = SpatialGrid::verification_default();
    let initial = WavefunctionSample::from_state(&state, grid, 0.0).unwrap();
    let run = propagate(&initial, state.field(), 1.0, 1e-4).unwrap();
    let exact = WavefunctionSample::from_state(&state, grid, 1.0).unwrap();
    let d = l2_distance(&run.sample, &exact, false).unwrap();
    outcome(d < 1e-7, format!("L2 distance at tau = 1: {d:.2e}"))
}

fn moment_correspondence() -> Outcome {
    let setup = PhysicalSetup::new(1.0, 1.0, 1.0, 1.0, 0.8, 1.1, 1.0).unwrap();
    let seed = SeedCoefficients::from_f0(Complex64::new(0.8, -0.3), 0.6).unwrap();
    let state = GcsState::in_setup(seed, Complex64::new(0.7, -0.5), &setup).unwrap();
    let (z0, p0) = state.classical_correspondence(&setup);
    let grid = SpatialGrid::verification_default();
    let initial = WavefunctionSample::from_state(&state, grid, 0.0).unwrap();
    let mut worst_moment: f64 = 0.0;
    let mut worst_track: f64 = 0.0;
    for tau in [0.0, 0.7, 1.3] {
        let closed = state.moments(tau);
        let sampled = quadrature_moments(&WavefunctionSample::from_state(&state, grid, tau).unwrap()).unwrap();
        let propagated = quadrature_moments(&propagate(&initial, state.field(), tau, 1e-4).unwrap().sample).unwrap();
        for m in [sampled, propagated] {
            for (a, b) in [
                (m.mean_q, closed.mean_q),
                (m.mean_p, closed.mean_p),
                (m.sigma_q, closed.sigma_q),
            ] {
                worst_moment = worst_moment.max((a - b).abs());
            }
        }
        let (z, p) = setup.classical_trajectory(z0, p0, setup.tau_to_time(tau));
        let (zq, pq, _) = setup.from_dimensionless(propagated.mean_q, propagated.mean_p, tau);
        worst_track = worst_track.max((z - zq).abs()).max((p - pq).abs());
    }
    outcome(
        worst_moment < 1e-6 && worst_track < 1e-6,
        format!("max moment error {worst_moment:.2e}, max trajectory error {worst_track:.2e}"),
    )
}

fn critical_times() -> Outcome {
    let free = RatioSet::new(0.9, 0.5, 0.0, 1.0);
    let cs = RatioSet::new(0.5, 0.0, 0.0, 1.0).coherent();
    let vi = RatioSet::new(0.6, 0.6, 0.2, 1.0);
    let cases = [
        ("free GCS", &free, critical_time_free(&free), 1.0, 10.0),
        ("free CS", &cs, critical_time_free_cs(&cs), 0.5, 5.0),
        ("field X=Y", &vi, critical_time_vi(&vi), 0.1, 5.0),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, r, closed, lo, hi) in cases {
        let root = brute_force_crossing(|s| r.ratio_at(s).unwrap(), 1.0, lo, hi).unwrap();
        let rel = (root - closed).abs() / closed;
        pass &= rel < 1e-8;
        parts.push(format!("{name} {root:.5} (rel {rel:.1e})"));
    }
    pass &= (critical_time_free(&free) - 4.21053).abs() < 1e-5
        && (critical_time_free_cs(&cs) - 4.0 / 3.0).abs() < 1e-14
        && (critical_time_vi(&vi) - 0.87298).abs() < 1e-5;
    outcome(pass, parts.join(", "))
}

fn reference_times() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut pass = true;
    let mut parts = Vec::new();
    for label in [ConditionLabel::Vii, ConditionLabel::Viii, ConditionLabel::Ix] {
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..100 {
            let (r, verdict) = match label {
                ConditionLabel::Ix => {
                    let xs: f64 = rng.gen_range(0.0..0.99);
                    let ws = rng.gen_range(0.005..1.0) * (1.0 - xs * xs) / 2.0;
                    let r = RatioSet::new(xs, 0.0, ws, 1.0);
                    (r, classify_field_cs_ratios(&r).unwrap())
                }
                _ => {
                    let x: f64 = rng.gen_range(0.01..0.98);
                    let y = rng.gen_range(x + 1e-3..0.999);
                    let floor = (1.0 - x * x) / 2.0;
                    let w = if label == ConditionLabel::Vii {
                        rng.gen_range(floor..0.5)
                    } else {
                        rng.gen_range(0.005..1.0) * floor
                    };
                    let r = RatioSet::new(x, y, w, 1.0);
                    (r, classify_field_gcs_ratios(&r).unwrap())
                }
            };
            let Regime::SemiclassicalAfter(t_ref) = verdict.regime else {
                return outcome(false, format!("{label}: unexpected verdict {verdict:?}"));
            };
            if verdict.label != label {
                return outcome(false, format!("expected {label}, got {}", verdict.label));
            }
            let hi = 1e4f64.max(10.0 * t_ref);
            worst = worst.max(max_ratio_on(&r, t_ref, hi));
        }
        pass &= worst <= 1.0 + 1e-9;
        parts.push(format!("{label}: max R = {worst:.6}"));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(30);
    outcome(pass, format!("{} ({elapsed:.2?})", parts.join(", ")))
}

fn verdict_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut found = 0;
    let mut draws = 0;
    let mut worst = f64::NEG_INFINITY;
    while found < 500 {
        draws += 1;
        let r = RatioSet::new(
            rng.gen_range(0.0..1.5),
            rng.gen_range(0.0..0.999),
            rng.gen_range(1e-3..1.0),
            1.0,
        );
        let v = classify_field_gcs_ratios(&r).unwrap();
        let eq_6_12 = matches!(v.label, ConditionLabel::Iii | ConditionLabel::Iv | ConditionLabel::V);
        if v.regime != Regime::SemiclassicalAlways || !eq_6_12 {
            continue;
        }
        found += 1;
        worst = worst.max(max_ratio_on(&r, 1e-6, 1e4));
    }
    outcome(
        worst <= 1.0 + 1e-9,
        format!("500 Always verdicts ({draws} draws), max R = {worst:.12}"),
    )
}

fn random_physical_input(rng: &mut ChaCha8Rng, si_units: bool) -> SemiclassicalInput {
    let y: f64 = if rng.gen_bool(0.3) {
        0.0
    } else {
        rng.gen_range(0.0..0.999)
    };
    if si_units {
        let setup = PhysicalSetup::electron_si(0.0, 0.0, 1e-9).unwrap();
        let sigma_z = 10f64.powf(rng.gen_range(-12.0..-8.0));
        let sigma_pz = setup.hbar() / (2.0 * sigma_z * (1.0 - y * y).sqrt());
        let p = -sigma_pz * 10f64.powf(rng.gen_range(-2.0..1.0));
        let w_unit = setup.mass() * si::ELEMENTARY_CHARGE * sigma_z / (2.0 * sigma_pz * sigma_pz);
        let field = 10f64.powf(rng.gen_range(-3.0..1.0)) / w_unit;
        SemiclassicalInput::new(sigma_z, sigma_pz, p, setup.with_field(field).unwrap()).unwrap()
    } else {
        let x = 10f64.powf(rng.gen_range(-2.0..0.5));
        let w = 10f64.powf(rng.gen_range(-3.0..0.5));
        SemiclassicalInput::from_ratios(x, y, w).unwrap()
    }
}

fn dimensional_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    for k in 0..1000 {
        let input = random_physical_input(&mut rng, k % 2 == 0);
        let report = physical_conditions_report(&input);
        let bad = report.mismatches(&input.ratios());
        if !bad.is_empty() {
            failures.push(format!("#{k}: {bad:?}"));
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            "1000 inputs, all exact flags agree".to_string()
        } else {
            format!("{} mismatching inputs, first {}", failures.len(), failures[0])
        },
    )
}

fn heisenberg_minimization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let sigma_q0 = 10f64.powf(rng.gen_range(-1.5..1.5));
        let state = GcsState::new(
            cs_specialize(sigma_q0).unwrap(),
            FieldParams::new(1.0, 0.3),
            random_zeta(&mut rng),
        )
        .unwrap();
        let m = state.moments(0.0);
        worst = worst.max((m.sigma_q * m.sigma_p - 0.5).abs());
    }
    outcome(
        worst < 1e-14,
        format!("1000 minimal states, max |σqσp − 1/2| = {worst:.1e}"),
    )
}

fn mutation_sensitivity() -> Outcome {
    let state = GcsState::new(
        cs_specialize(1.0 / 2f64.sqrt()).unwrap(),
        FieldParams::new(1.0, FRAC_PI_2),
        Complex64::new(1.0, 0.0),
    )
    .unwrap();
    let grid = SpatialGrid::verification_default();
    let exact = schrodinger_residual(&state, &grid, 0.5, 1e-3).unwrap();
    let mutated = schrodinger_residual_with(&state, &grid, 0.5, 1e-3, PhaseVariant::WithoutPhaseIntegral).unwrap();
    outcome(
        mutated > 1e-2 && exact < 1e-6,
        format!("residual exact {exact:.2e}, without phase integral {mutated:.3e}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("Robertson-Schrodinger identity", robertson_schrodinger),
        ("Schrodinger-equation oracle", schrodinger_oracle),
        ("free exact solution", free_exact_solution),
        ("moment correspondence", moment_correspondence),
        ("critical-time exactness", critical_times),
        ("reference-time sufficiency", reference_times),
        ("verdict soundness", verdict_soundness),
        ("dimensional/dimensionless equivalence", dimensional_equivalence),
        ("Heisenberg minimization", heisenberg_minimization),
        ("mutation sensitivity", mutation_sensitivity),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| outcome(false, "panicked".into()));
        let tag = if result.pass { "PASS" } else { "FAIL" };
        if !result.pass {
            failed += 1;
        }
        println!("criterion {:>2} {tag}  {name}: {}", k + 1, result.detail);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
