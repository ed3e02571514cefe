//! One line per acceptance criterion, `PASS` or `FAIL`, with wall time.

mod common;

use std::time::{Duration, Instant};

use qmorse::barycenter::{chi_barycenter, disjoint_union_barycenter, BarycenterProvider, SpaceDescriptor};
use qmorse::boundary::{boundary_betti, euler_boundary, BoundaryBarycenterInput};
use qmorse::bubble::{bubble_pde_residual, pde_convergence, Bubble};
use qmorse::certify::{assemble_counts, check_system_k, check_system_k1, hopf_sum, MorseCounts};
use qmorse::critical::{find_critical_points, SearchConfig};
use qmorse::functional::{energy_at_infinity, fd_gradient, grad_f_pq};
use qmorse::graded::{euler_characteristic, BettiTable};
use qmorse::model::ManifoldModel;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn disk_golden() -> Outcome {
    let input = BoundaryBarycenterInput::disk(BarycenterProvider::base_only(SpaceDescriptor::sphere(2))).unwrap();
    let t = boundary_betti(&input, 2).unwrap();
    outcome(t == BettiTable::reduced([(2, 1), (3, 1)]), format!("B_2^∂(D²) = {t}"))
}

fn euler_zero() -> Outcome {
    let bad: Vec<i64> = (1..=20).filter(|&l| chi_barycenter(0, l).unwrap() != 0).collect();
    outcome(bad.is_empty(), format!("nonzero at l = {bad:?}"))
}

fn theorem_cross_check() -> Outcome {
    let inputs = common::synthetic_inputs();
    let mut mismatches = 0;
    for (_, input) in &inputs {
        for l in 1..=6 {
            let table = boundary_betti(input, l).unwrap();
            if euler_characteristic(&table) != euler_boundary(input.chi_m(), l, true).unwrap() {
                mismatches += 1;
            }
        }
    }
    outcome(inputs.len() >= 20 && mismatches == 0, format!("{} inputs × 6 orders, {mismatches} mismatches", inputs.len()))
}

fn disjoint_circles() -> Outcome {
    let c = BarycenterProvider::circle();
    let t = disjoint_union_barycenter(&c, &c, 3).unwrap();
    outcome(t == BettiTable::reduced([(5, 4), (4, 3)]), format!("B_3(S¹ ⊔ S¹) = {t}"))
}

fn feasibility_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 1200;
    let mut disagreements = 0;
    let mut feasible = 0;
    for _ in 0..n {
        let (k, m, c) = common::random_instance(&mut rng);
        let counts = MorseCounts { k, m: m.clone() };
        let lib = if k == 1 {
            check_system_k1(&counts).unwrap().feasible
        } else {
            check_system_k(&counts, &c, k).unwrap().feasible
        };
        let oracle = common::enumerate_feasible(k, &m, &c);
        disagreements += (lib != oracle) as usize;
        feasible += oracle as usize;
    }
    outcome(disagreements == 0, format!("{n} instances ({feasible} feasible), {disagreements} disagreements"))
}

fn hopf_arithmetic() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let n = 1500;
    let bad = (0..n)
        .filter(|_| {
            let s = common::random_summary(&mut rng);
            hopf_sum(&s) != assemble_counts(&s).unwrap().morse_at_minus_one()
        })
        .count();
    outcome(bad == 0, format!("{n} summaries, {bad} mismatches"))
}

fn gradient_fidelity() -> Outcome {
    let model = common::gradient_model();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst: f64 = 0.0;
    let strata = [(0, 1), (1, 0), (0, 2), (1, 1), (0, 3), (2, 0), (1, 2), (0, 4)];
    for (p, q) in strata {
        for _ in 0..100 {
            let cfg = common::random_configuration(model.domain(), p, q, 0.2, &mut rng);
            let g = grad_f_pq(&model, &cfg).unwrap();
            let fd = fd_gradient(&model, &cfg, 1e-5).unwrap();
            let scale = g.iter().map(|v| v.abs()).fold(1.0, f64::max);
            let d = g.iter().zip(&fd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale;
            worst = worst.max(d);
        }
    }
    outcome(worst <= 1e-6, format!("{} strata × 100 configurations, worst relative defect {worst:.2e}", strata.len()))
}

fn bump_recovery() -> Outcome {
    let cfg = SearchConfig {
        starts: 16,
        seed: 1,
        ..SearchConfig::default()
    };
    let mut notes = Vec::new();
    let mut ok = true;
    for (dkdn, sign) in [(0.5, 1i8), (-0.5, -1i8)] {
        let model = common::bump_model(dkdn);
        let out = find_critical_points(&model, 0, 1, &cfg);
        match out.points.as_slice() {
            [pt] => {
                let u = pt.config.boundary[0];
                let dist = ((u[0] - 0.1).powi(2) + (u[1] + 0.2).powi(2) + u[2].powi(2)).sqrt();
                ok &= dist < 1e-6 && pt.morse_index == 3 && pt.i_inf == 0 && pt.lk_sign == sign;
                notes.push(format!("∂K/∂n = {dkdn}: dist {dist:.1e}, index {}, i_inf {}, sign {}", pt.morse_index, pt.i_inf, pt.lk_sign));
            }
            pts => {
                ok = false;
                notes.push(format!("∂K/∂n = {dkdn}: {} points", pts.len()));
            }
        }
    }
    outcome(ok, notes.join("; "))
}

fn bubble_pde() -> Outcome {
    let b = Bubble::unit();
    let r = pde_convergence(&b, 0.04).unwrap();
    let at = bubble_pde_residual(&b, 0.02).unwrap();
    outcome(
        r.order >= 1.9 && at < 0.5,
        format!("order {:.3} (h 0.04 → 0.02), residual at h = 0.02: {at:.3e}", r.order),
    )
}

fn energy_level() -> Outcome {
    let pi2 = std::f64::consts::PI.powi(2);
    let expect = -(20.0 / 3.0) * pi2 - 4.0 * pi2 * (pi2 / 6.0).ln();
    let got = energy_at_infinity(0.0, 1);
    let rel = (got - expect).abs() / expect.abs();
    outcome(rel <= 1e-12, format!("{got} vs {expect}, relative {rel:.1e}"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, Option<Duration>, fn() -> Outcome); 10] = [
        ("disk golden value", Some(Duration::from_secs(1)), disk_golden),
        ("Euler closed form at χ = 0", None, euler_zero),
        ("Betti tables against the Euler closed form", None, theorem_cross_check),
        ("disjoint circles at order 3", None, disjoint_circles),
        ("feasibility recursion against enumeration", Some(Duration::from_secs(30)), feasibility_oracle),
        ("Euler sum equals M(−1)", None, hopf_arithmetic),
        ("gradient against central differences", None, gradient_fidelity),
        ("one-bump critical point recovery", Some(Duration::from_secs(10)), bump_recovery),
        ("bubble equation residual order", Some(Duration::from_secs(60)), bubble_pde),
        ("energy level at F = 0, k = 1", None, energy_level),
    ];
    let mut failed = Vec::new();
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = budget.map_or(true, |b| elapsed < b);
        let pass = out.ok && in_time;
        let budget_note = budget.map_or(String::new(), |b| format!(" / budget {:.0?}", b));
        println!(
            "criterion {:>2} {} {name}: {} [{:.3?}{budget_note}]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed
        );
        if !pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
