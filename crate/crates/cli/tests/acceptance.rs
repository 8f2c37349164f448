//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::f64::consts::{PI, TAU};
use std::process::Command;

use harnack_cli::verify::{uniform_thetas, verify_theorem, VerifyOptions};
use harnack_core::kernels::{resolvent_power_coeffs, resolvent_via_expansion, verify_ker_condition};
use harnack_core::operator::{conjugate_by_diagonal_unitary, normalized_weight};
use harnack_core::oracle::{check_all_identities, check_polynomial_identity, IdentityId};
use harnack_core::radii::BISECTION_TOL;
use harnack_core::shift5::{family1_phases, family2_phases, family2_representative, CONDITION_TOL};
use harnack_core::{
    block_decompose, build_shift, check_corollary_conditions, family1, family2, in_zero_part, is_equivalent,
    numerical_radius, operator_norm, rho_kernel, rho_radius, BlockForm, Complex64, ComplexSquareMatrix, GridSpec,
    NullVectorParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);
type Criterion = (u32, &'static str, fn() -> Outcome);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rand_complex(rng: &mut ChaCha8Rng, scale: f64) -> Complex64 {
    Complex64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
}

fn rand_disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.random::<f64>().sqrt(), rng.random_range(0.0..TAU))
}

fn thetas8() -> Vec<f64> {
    uniform_thetas(8)
}

fn criterion_1() -> Outcome {
    let s5 = build_shift(5, true).unwrap();
    let w = numerical_radius(&s5, 720).unwrap().value;
    let n5 = operator_norm(&s5).value;
    let n3 = operator_norm(&build_shift(3, true).unwrap()).value;
    let n4 = operator_norm(&build_shift(4, true).unwrap()).value;
    let errs = [
        (w - 1.0).abs(),
        (n5 - 2.0 / 3f64.sqrt()).abs(),
        (n3 - 2f64.sqrt()).abs(),
        (n4 - 1.0 / (PI / 5.0).cos()).abs(),
    ];
    let ok = errs[0] <= 1e-8 && errs[1..].iter().all(|&e| e <= 1e-10);
    (
        ok,
        format!(
            "|w(S5)-1|={:.1e} norm errors S5/S3/S4 = {:.1e}/{:.1e}/{:.1e}",
            errs[0], errs[1], errs[2], errs[3]
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let grid = GridSpec::radius_default();
    let (mut worst1, mut worst2) = (0.0_f64, 0.0_f64);
    for _ in 0..25 {
        let m = ComplexSquareMatrix::from_fn(5, |_, _| rand_complex(&mut rng, 1.0));
        let t = m.scale_real(1.0 / numerical_radius(&m, 720).unwrap().value);
        let w1 = rho_radius(&t, 1.0, &grid, 1e-9).unwrap().value;
        let w2 = rho_radius(&t, 2.0, &grid, 1e-9).unwrap().value;
        worst1 = worst1.max((w1 - operator_norm(&t).value).abs());
        worst2 = worst2.max((w2 - numerical_radius(&t, 720).unwrap().value).abs());
    }
    let s = build_shift(5, true).unwrap();
    let w_large = rho_radius(&s, 1e3, &grid, BISECTION_TOL).unwrap().value;
    let ok = worst1 <= 1e-5 && worst2 <= 1e-5 && w_large <= 1e-2;
    (
        ok,
        format!("max|w1-norm|={worst1:.1e} max|w2-w|={worst2:.1e} w_1000(S)={w_large:.6} (required <= 1e-2)"),
    )
}

fn criterion_3() -> Outcome {
    let s = build_shift(5, true).unwrap();
    let grid = GridSpec::harnack_default();
    let params = NullVectorParams::shift5();
    let mut worst = 0.0_f64;
    let mut failures = Vec::new();
    for theta in thetas8() {
        for (name, t) in [("family1", family1(theta)), ("family2", family2(theta))] {
            let rep = check_corollary_conditions(&t, &params, &grid, CONDITION_TOL).unwrap();
            worst = worst.max(rep.entries.values().map(|e| e.residual).fold(0.0, f64::max));
            let (eq, _, _) = is_equivalent(&t, &s, 2.0, &grid).unwrap();
            if !rep.verdict() || !eq {
                failures.push(format!("{name}({theta:.3})"));
            }
        }
    }
    let f2 = family2(0.7);
    let norm_err = (operator_norm(&f2).value - 3f64.sqrt()).abs();
    let m = block_decompose(&f2).unwrap().m_matrix();
    let m_err = m.max_abs_diff(&ComplexSquareMatrix::diagonal(&[c(0.25), c(1.0), c(0.25)]));
    let ok = failures.is_empty() && worst <= 1e-8 && norm_err <= 1e-10 && m_err <= 4.0 * f64::EPSILON;
    (
        ok,
        format!(
            "16 members, worst residual {worst:.1e}, failures {failures:?}; |norm-√3|={norm_err:.1e}, |M-diag(1/4,1,1/4)|={m_err:.1e}"
        ),
    )
}

fn criterion_4() -> Outcome {
    let s = build_shift(5, true).unwrap();
    let pos = family2_representative();
    let mut worst = 0.0_f64;
    for theta in thetas8() {
        let u1 = conjugate_by_diagonal_unitary(&s, &family1_phases(theta)).unwrap();
        let u2 = conjugate_by_diagonal_unitary(&pos, &family2_phases(theta)).unwrap();
        worst = worst
            .max(u1.max_abs_diff(&family1(theta)))
            .max(u2.max_abs_diff(&family2(theta)));
    }
    (
        worst <= 1e-12,
        format!("max entrywise deviation {worst:.1e} over 8 angles"),
    )
}

fn criterion_5() -> Outcome {
    let s = build_shift(5, true).unwrap();
    let half = s.scale_real(0.5);
    let (eq, fwd, bwd) = is_equivalent(&half, &s, 2.0, &GridSpec::harnack_default()).unwrap();
    let one_way = fwd.feasible != bwd.feasible;
    let zero_part = in_zero_part(&half, 2.0).unwrap();

    let a = normalized_weight(5);
    let z = c(0.0);
    let r = ComplexSquareMatrix::from_fn(3, |i, j| match (i, j) {
        (1, 1) => c(0.4),
        (2, 2) => c(0.2),
        (0, 1) | (1, 2) => c(0.5),
        _ => z,
    });
    let blocks = BlockForm::from_parts([c(a), z, z], r, [z, z, c(a)]).unwrap();
    let rep = check_corollary_conditions(
        &blocks.reassemble(),
        &NullVectorParams::shift5(),
        &GridSpec::harnack_default(),
        CONDITION_TOL,
    )
    .unwrap();
    let failing = rep.failing();
    let ok = !eq && one_way && zero_part && !failing.is_empty();
    (
        ok,
        format!(
            "0.5S~S: {eq} (fwd {}, bwd {}), in zero part: {zero_part}; spectrum {{0,0.4,0.2}} fails {failing:?}",
            fwd.feasible, bwd.feasible
        ),
    )
}

fn triangular_with_spectrum(rng: &mut ChaCha8Rng, l1: Complex64, l2: Complex64) -> ComplexSquareMatrix {
    let (x, y, w) = (rand_complex(rng, 1.0), rand_complex(rng, 1.0), rand_complex(rng, 1.0));
    ComplexSquareMatrix::from_fn(3, |i, j| match (i, j) {
        (1, 1) => l1,
        (2, 2) => l2,
        (0, 1) => x,
        (0, 2) => y,
        (1, 2) => w,
        _ => c(0.0),
    })
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let id = ComplexSquareMatrix::identity(3);
    let mut worst_distinct = 0.0_f64;
    let mut worst_confluent = 0.0_f64;
    for k in 0..200 {
        let l1 = rand_disk(&mut rng, 0.9);
        let l2 = if k < 100 { rand_disk(&mut rng, 0.9) } else { l1 };
        let r = triangular_with_spectrum(&mut rng, l1, l2);
        let z = rand_disk(&mut rng, 1.0);
        let direct = (&id - &r.scale(z.conj())).inverse().unwrap();
        let err = resolvent_via_expansion(&r, l1, l2, z).unwrap().max_abs_diff(&direct);
        if k < 100 {
            worst_distinct = worst_distinct.max(err);
        } else {
            worst_confluent = worst_confluent.max(err);
        }
    }
    let mut worst_limit = 0.0_f64;
    for _ in 0..20 {
        let l = rand_disk(&mut rng, 0.9);
        let l2 = l + Complex64::from_polar(1e-7, rng.random_range(0.0..TAU));
        for n in 1..=30 {
            let near = resolvent_power_coeffs(l, l2, n);
            let conf = resolvent_power_coeffs(l, l, n);
            worst_limit = worst_limit.max((near.a - conf.a).norm()).max((near.b - conf.b).norm());
        }
    }
    let ok = worst_distinct <= 1e-12 && worst_confluent <= 1e-12 && worst_limit <= 1e-5;
    (
        ok,
        format!(
            "distinct {worst_distinct:.1e}, confluent {worst_confluent:.1e}, gap-1e-7 continuity {worst_limit:.1e}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let params = NullVectorParams::shift5();
    let mut members = vec![build_shift(5, true).unwrap()];
    for theta in thetas8() {
        members.push(family1(theta));
        members.push(family2(theta));
    }
    let mut worst_ker = 0.0_f64;
    let mut min_eig = f64::INFINITY;
    for t in &members {
        worst_ker = worst_ker.max(verify_ker_condition(t, &params, 128).unwrap().residual);
        for k in 0..32 {
            let z = Complex64::from_polar(0.9, TAU * k as f64 / 32.0);
            min_eig = min_eig.min(rho_kernel(t, z, 2.0).unwrap().min_eigenvalue);
        }
    }
    let ok = worst_ker <= 1e-8 && min_eig > 1e-3;
    (
        ok,
        format!("max boundary residual {worst_ker:.1e}, min eigenvalue at |z|=0.9 {min_eig:.3e}"),
    )
}

fn criterion_8() -> Outcome {
    let params = NullVectorParams::shift5();
    let mut worst = 0.0_f64;
    let mut all = true;
    for theta in thetas8() {
        for t in [family1(theta), family2(theta)] {
            for chk in check_all_identities(&block_decompose(&t).unwrap(), &params).unwrap() {
                all &= chk.pass;
                worst = worst.max(chk.max_residual);
            }
        }
    }
    let mut blocks = block_decompose(&family1(0.0)).unwrap();
    blocks.b[0] += 0.1;
    let pert = check_polynomial_identity(&blocks, &params, c(0.0), IdentityId::Eq4).unwrap();
    let top = pert.failing_degrees().contains(&4);
    let ok = all && !pert.pass && top;
    (
        ok,
        format!(
            "64 identity checks, worst residual {worst:.1e}; perturbed eq4 fails at degrees {:?}",
            pert.failing_degrees()
        ),
    )
}

fn criterion_9() -> Outcome {
    let opts = VerifyOptions {
        rho: 2.0,
        cap: harnack_core::harnack::INFEASIBILITY_CAP,
        tol: 1e-8,
        grid: GridSpec::harnack_default(),
        thetas: thetas8(),
    };
    let d3 = verify_theorem(3, &opts).unwrap();
    let d4 = verify_theorem(4, &opts).unwrap();
    let ok = d3.verdict && d3.passed == 8 && d4.verdict && d4.passed == 2;
    (
        ok,
        format!("dim 3: {}/8 equivalent; dim 4: {}/2 equivalent", d3.passed, d4.passed),
    )
}

fn criterion_10() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_harnack"))
            .args(["verify-theorem", "--dim", "5", "--theta-samples", "8"])
            .env_remove("HARNACK_DEFAULT_TOL")
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let parsed: Option<serde_json::Value> = serde_json::from_slice(&a.stdout).ok();
    let checks = parsed
        .as_ref()
        .and_then(|v| v["checks"].as_array().map(|c| c.len()))
        .unwrap_or(0);
    let identical = a.stdout == b.stdout && !a.stdout.is_empty();
    let ok = identical && a.status.code() == Some(0) && checks == 16;
    (
        ok,
        format!(
            "byte-identical: {identical}, {} bytes, {checks} family checks, exit {:?}",
            a.stdout.len(),
            a.status.code()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "shift constants", criterion_1),
        (2, "radius identities", criterion_2),
        (3, "solution families", criterion_3),
        (4, "unitary-orbit witnesses", criterion_4),
        (5, "negative controls", criterion_5),
        (6, "resolvent oracle", criterion_6),
        (7, "kernel null structure", criterion_7),
        (8, "oracle identities", criterion_8),
        (9, "lower dimensions", criterion_9),
        (10, "determinism", criterion_10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (n, name, f) in criteria {
        let label = format!("criterion_{n:02}");
        if !filter.is_empty() && !filter.iter().any(|p| label.contains(p.as_str())) {
            continue;
        }
        let start = std::time::Instant::now();
        let (ok, detail) = f();
        if !ok {
            failed += 1;
        }
        println!(
            "{} {label} {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("acceptance: {failed} criterion(s) failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
