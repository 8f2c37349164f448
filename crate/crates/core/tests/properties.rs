use std::f64::consts::TAU;

use harnack_core::harnack::domination_constant;
use harnack_core::kernels::resolvent_power_coeffs;
use harnack_core::operator::{conjugate_by_diagonal_unitary, superdiagonal};
use harnack_core::oracle::{check_all_identities, check_polynomial_identity_at, eq4_coefficients, IdentityId};
use harnack_core::{
    block_decompose, build_shift, classify, family1, family2, numerical_radius, operator_norm, rho_kernel, rho_radius,
    spectral_radius, BlockForm, Complex64, ComplexSquareMatrix, GridSpec, NullVectorParams,
};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn matrix(n: usize) -> impl Strategy<Value = ComplexSquareMatrix> {
    prop::collection::vec(complex(), n * n).prop_map(move |d| ComplexSquareMatrix::from_row_major(n, &d).unwrap())
}

fn disk_point(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..radius, 0.0..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn coarse_grid() -> GridSpec {
    GridSpec::new(vec![0.2, 0.5, 0.8], 12, 48).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_is_bit_exact(m in matrix(4)) {
        let back = ComplexSquareMatrix::from_json_str(&m.to_json_string()).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn kernel_is_hermitian_and_rho_at_origin(m in matrix(4), z in disk_point(0.3), rho in 0.5..5.0f64) {
        let t = m.scale_real(0.5);
        let k = rho_kernel(&t, z, rho).unwrap();
        prop_assert!(k.symmetrization_defect <= 1e-12);
        let k0 = rho_kernel(&t, Complex64::new(0.0, 0.0), rho).unwrap();
        let expect = ComplexSquareMatrix::identity(4).scale_real(rho);
        prop_assert!(k0.k.matrix().max_abs_diff(&expect) <= 1e-14);
    }

    #[test]
    fn kernel_matches_explicit_inverse(m in matrix(3), z in disk_point(0.9)) {
        let t = m.scale_real(0.3);
        let id = ComplexSquareMatrix::identity(3);
        let left = (&id - &t.scale(z.conj())).inverse().unwrap();
        let right = (&id - &t.adjoint().scale(z)).inverse().unwrap();
        let direct = &(&left + &right) - &id.scale_real(0.5);
        let k = rho_kernel(&t, z, 1.5).unwrap();
        prop_assert!(k.k.matrix().max_abs_diff(&direct) <= 1e-12);
    }

    #[test]
    fn unitary_invariance_of_radii(m in matrix(4), phases in prop::collection::vec(0.0..TAU, 4)) {
        let u = conjugate_by_diagonal_unitary(&m, &phases).unwrap();
        prop_assert!((operator_norm(&m).value - operator_norm(&u).value).abs() <= 1e-12);
        prop_assert!((spectral_radius(&m).value - spectral_radius(&u).value).abs() <= 1e-10);
        let (a, b) = (numerical_radius(&m, 64).unwrap().value, numerical_radius(&u, 64).unwrap().value);
        prop_assert!((a - b).abs() <= 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn numerical_radius_sandwich(m in matrix(5)) {
        let w = numerical_radius(&m, 128).unwrap().value;
        let n = operator_norm(&m).value;
        let r = spectral_radius(&m).value;
        prop_assert!(r <= w + 1e-9 && w <= n + 1e-9 && n <= 2.0 * w + 1e-9);
    }

    #[test]
    fn numerical_radius_agrees_with_dense_sweep(m in matrix(3)) {
        // max over θ of λ_max(Re(e^{iθ}T)) on a fine grid, no refinement
        let dense = (0..4000)
            .map(|k| {
                let h = m.scale(Complex64::from_polar(1.0, TAU * k as f64 / 4000.0)).hermitian_part();
                harnack_core::HermitianForm::symmetrize(&h).max_eigenvalue()
            })
            .fold(f64::NEG_INFINITY, f64::max);
        let w = numerical_radius(&m, 64).unwrap().value;
        prop_assert!(w >= dense - 1e-12);
        prop_assert!(w - dense <= 2e-6 * (1.0 + w), "{} vs {}", w, dense);
    }

    #[test]
    fn power_coefficients_reproduce_powers(l1 in disk_point(0.95), l2 in disk_point(0.95), n in 1u32..12) {
        // companion-type R with spectrum {0, λ₁, λ₂}
        let r = ComplexSquareMatrix::from_fn(3, |i, j| match (i, j) {
            (1, 1) => l1,
            (2, 2) => l2,
            (0, 1) | (1, 2) | (0, 2) => Complex64::new(0.5, 0.0),
            _ => Complex64::new(0.0, 0.0),
        });
        let c = resolvent_power_coeffs(l1, l2, n);
        let recon = &(&r * &r).scale(c.a) + &r.scale(c.b);
        prop_assert!(recon.max_abs_diff(&r.pow(n)) <= 1e-10);
    }

    #[test]
    fn eq4_dft_and_hand_expansion_agree(a in prop::collection::vec(complex(), 3), b in prop::collection::vec(complex(), 3), s in prop::collection::vec(complex(), 3)) {
        // strictly upper triangular R, so λ = 0 satisfies the minimal-polynomial hypothesis
        let r = ComplexSquareMatrix::from_fn(3, |i, j| match (i, j) {
            (0, 1) => s[0],
            (0, 2) => s[1],
            (1, 2) => s[2],
            _ => Complex64::new(0.0, 0.0),
        });
        let blocks = BlockForm::from_parts([a[0], a[1], a[2]], r, [b[0], b[1], b[2]]).unwrap();
        let zero = Complex64::new(0.0, 0.0);
        let chk = check_polynomial_identity_at(&blocks, &NullVectorParams::shift5(), zero, IdentityId::Eq4, 8).unwrap();
        let hand = eq4_coefficients(&blocks, zero);
        for (k, coeff) in chk.coefficients.iter().enumerate() {
            let expect = hand.get(k).copied().unwrap_or(zero);
            prop_assert!((coeff[0] - expect).norm() <= 1e-13, "z^{}", k);
        }
        let hand_pass = hand.iter().all(|c| c.norm() <= 1e-9 * blocks.entry_scale());
        prop_assert_eq!(chk.pass, hand_pass);
    }

    #[test]
    fn classified_members_pass_identities(theta in 0.0..TAU, second in any::<bool>()) {
        let t = if second { family2(theta) } else { family1(theta) };
        let (tag, _) = classify(&t, 1e-6).unwrap();
        prop_assert!(tag.family != harnack_core::Family::None);
        for chk in check_all_identities(&block_decompose(&t).unwrap(), &NullVectorParams::shift5()).unwrap() {
            prop_assert!(chk.pass);
        }
    }

    #[test]
    fn classify_recovers_theta(theta in 0.0..TAU) {
        let (tag, _) = classify(&family2(theta), 1e-6).unwrap();
        prop_assert!(tag.represents(harnack_core::Family::Family2, theta, 1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn rho_radius_scaling(m in matrix(3), c in 0.3..2.0f64) {
        let grid = GridSpec::new(vec![0.3, 0.6, 0.9], 16, 64).unwrap();
        let w = rho_radius(&m, 1.5, &grid, 1e-9).unwrap().value;
        let wc = rho_radius(&m.scale_real(c), 1.5, &grid, 1e-9).unwrap().value;
        prop_assert!((wc - c * w).abs() <= 1e-6 * (1.0 + wc), "{} vs {}", wc, c * w);
    }

    #[test]
    fn rho_radius_monotone_in_rho(m in matrix(3)) {
        let grid = GridSpec::new(vec![0.3, 0.6, 0.9], 16, 64).unwrap();
        let ws: Vec<f64> = [0.5, 1.0, 2.0, 4.0, 16.0]
            .iter()
            .map(|&rho| rho_radius(&m, rho, &grid, 1e-9).unwrap().value)
            .collect();
        let r = spectral_radius(&m).value;
        for pair in ws.windows(2) {
            prop_assert!(pair[1] <= pair[0] + 1e-6, "{:?}", ws);
        }
        prop_assert!(ws[4] >= r - 1e-6);
    }

    #[test]
    fn domination_is_transitive(s1 in 0.05..0.9f64, s2 in 0.05..0.9f64) {
        let base = build_shift(4, true).unwrap();
        let (t1, t2) = (base.scale_real(s1), base.scale_real(s2));
        let zero = ComplexSquareMatrix::zeros(4);
        let grid = coarse_grid();
        let c12 = domination_constant(&t1, &t2, 2.0, &grid, 1e-8).unwrap();
        let c20 = domination_constant(&t2, &zero, 2.0, &grid, 1e-8).unwrap();
        let c10 = domination_constant(&t1, &zero, 2.0, &grid, 1e-8).unwrap();
        prop_assert!(c12.feasible && c20.feasible && c10.feasible);
        for ((a, b), c) in c12.samples.iter().zip(&c20.samples).zip(&c10.samples) {
            let (a, b, c) = (a.c_squared_min.unwrap(), b.c_squared_min.unwrap(), c.c_squared_min.unwrap());
            prop_assert!(c <= a * b * (1.0 + 1e-9) + 1e-12);
        }
    }

    #[test]
    fn domination_unitary_invariance(theta in 0.0..TAU, phases in prop::collection::vec(0.0..TAU, 5)) {
        let s = build_shift(5, true).unwrap();
        let f = family2(theta);
        let grid = coarse_grid();
        let c = domination_constant(&f, &s, 2.0, &grid, 1e-8).unwrap();
        let fu = conjugate_by_diagonal_unitary(&f, &phases).unwrap();
        let su = conjugate_by_diagonal_unitary(&s, &phases).unwrap();
        let cu = domination_constant(&fu, &su, 2.0, &grid, 1e-8).unwrap();
        prop_assert!(c.feasible && cu.feasible);
        prop_assert!((c.c.unwrap() - cu.c.unwrap()).abs() <= 1e-7 * c.c.unwrap());
    }
}

#[test]
fn superdiagonal_orbit_shares_norm() {
    let w = [0.3, 1.2, 0.7].map(|x| Complex64::new(x, 0.0));
    let t = superdiagonal(&w);
    let u = conjugate_by_diagonal_unitary(&t, &[0.1, 2.0, -1.0, 0.4]).unwrap();
    assert!((operator_norm(&t).value - operator_norm(&u).value).abs() < 1e-12);
}
