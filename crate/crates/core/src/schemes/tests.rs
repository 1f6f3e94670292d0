use super::*;

fn grid(m: usize, dx: f64, dt: f64) -> Grid {
    Grid::new(0.0, dx * m as f64, m, dt).unwrap()
}

fn all_specs() -> Vec<SchemeSpec> {
    vec![
        SchemeSpec::new(SchemeFamily::EC8, 0.5).unwrap(),
        SchemeSpec::new(SchemeFamily::MC8, -0.077).unwrap(),
        SchemeSpec::new(SchemeFamily::EC10, 0.04).unwrap(),
        SchemeSpec::new(SchemeFamily::MC10, 0.19).unwrap(),
        SchemeSpec::plain(SchemeFamily::NarrowBox),
        SchemeSpec::plain(SchemeFamily::Multisymplectic),
    ]
}

fn wavy(m: usize, phase: f64) -> GridFunction {
    GridFunction::new(
        (0..m)
            .map(|i| {
                let x = i as f64 / m as f64 * std::f64::consts::TAU;
                1.3 * (x + phase).sin() - 0.4 * (3.0 * x - phase).cos() + 0.2
            })
            .collect(),
    )
}

fn wavy_field(m: usize) -> TwoLevelField {
    TwoLevelField::new(wavy(m, 0.1), wavy(m, 0.35)).unwrap()
}

#[test]
fn zero_field_has_zero_residual() {
    let g = grid(20, 0.2, 0.05);
    let field = TwoLevelField::stationary(GridFunction::zeros(20));
    for spec in all_specs() {
        let r = residual(&spec, &g, &field).unwrap();
        assert!(r.iter().all(|&v| v == 0.0), "{}", spec.label());
    }
}

#[test]
fn constant_field_has_zero_residual() {
    let g = grid(20, 0.2, 0.05);
    let field = TwoLevelField::stationary(GridFunction::constant(20, 0.8));
    for spec in all_specs() {
        let r = residual(&spec, &g, &field).unwrap();
        assert!(r.max_abs() <= 1e-12, "{}: {:e}", spec.label(), r.max_abs());
    }
}

#[test]
fn too_small_grid_rejected() {
    let g = grid(8, 0.2, 0.05);
    let field = TwoLevelField::stationary(GridFunction::zeros(8));
    let spec = SchemeSpec::plain(SchemeFamily::EC10);
    assert!(matches!(
        residual(&spec, &g, &field),
        Err(Error::GridTooSmall { required: 10, found: 8, .. })
    ));
}

#[test]
fn length_mismatch_and_non_finite_rejected() {
    let g = grid(20, 0.2, 0.05);
    let spec = SchemeSpec::plain(SchemeFamily::MC10);
    let short = TwoLevelField::stationary(GridFunction::zeros(19));
    assert!(matches!(residual(&spec, &g, &short), Err(Error::LengthMismatch { .. })));
    let mut bad = GridFunction::zeros(20);
    bad.values_mut()[3] = f64::NAN;
    let nan = TwoLevelField::new(GridFunction::zeros(20), bad).unwrap();
    assert!(matches!(residual(&spec, &g, &nan), Err(Error::NonFinite { .. })));
}

#[test]
fn baselines_reject_lambda() {
    assert!(SchemeSpec::new(SchemeFamily::NarrowBox, 0.1).is_err());
    assert!(SchemeSpec::new(SchemeFamily::EC8, f64::NAN).is_err());
}

#[test]
fn family_parsing() {
    for f in SchemeFamily::ALL {
        assert_eq!(f.name().parse::<SchemeFamily>().unwrap(), f);
    }
    assert_eq!("avf-ec".parse::<SchemeFamily>().unwrap(), SchemeFamily::EC10);
    assert_eq!("ms".parse::<SchemeFamily>().unwrap(), SchemeFamily::Multisymplectic);
    assert!("ec9".parse::<SchemeFamily>().is_err());
    assert_eq!(SchemeSpec::new(SchemeFamily::EC10, 0.04).unwrap().label(), "EC10(0.04)");
}

/// Average-vector-field discretisations written node by node.
fn avf_oracle(energy_conserving: bool, dx: f64, dt: f64, a: &[f64], b: &[f64]) -> Vec<f64> {
    let m = a.len();
    let w = |i: isize| i.rem_euclid(m as isize) as usize;
    let p = |i: isize| 0.5 * (a[w(i)] + b[w(i)]);
    let s = |i: isize| 0.5 * (a[w(i)] * a[w(i)] + b[w(i)] * b[w(i)]);
    (0..m as isize)
        .map(|i| {
            let dudt = (b[w(i)] - a[w(i)]) / dt;
            if energy_conserving {
                let psi = |j: isize| p(j) * s(j) / 3.0 + (p(j + 1) - 2.0 * p(j) + p(j - 1)) / (dx * dx);
                (psi(i + 1) - psi(i - 1)) / (2.0 * dx) + dudt
            } else {
                let q = |j: isize| 0.5 * (p(j) + p(j + 1));
                let theta = |j: isize| {
                    let (l, r) = (p(j - 1), p(j));
                    0.5 * (l + r) * 0.5 * (l * l + r * r) / 3.0
                        + (q(j) - 2.0 * q(j - 1) + q(j - 2)) / (dx * dx)
                };
                (theta(i + 1) - theta(i)) / dx + dudt
            }
        })
        .collect()
}

#[test]
fn ten_point_families_reduce_to_avf_at_zero_lambda() {
    let (dx, dt) = (0.15, 0.03);
    let g = grid(24, dx, dt);
    let field = wavy_field(24);
    for (family, ec) in [(SchemeFamily::EC10, true), (SchemeFamily::MC10, false)] {
        let r = residual(&SchemeSpec::plain(family), &g, &field).unwrap();
        let oracle = avf_oracle(ec, dx, dt, field.level0().values(), field.level1().values());
        let scale = oracle.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        for (x, y) in r.iter().zip(&oracle) {
            assert!((x - y).abs() <= 1e-13 * scale, "{family}: {x} vs {y}");
        }
    }
}

#[test]
fn narrow_box_jacobian_at_zero() {
    let (dx, dt) = (0.2, 0.05);
    let m = 16;
    let g = grid(m, dx, dt);
    let field = TwoLevelField::stationary(GridFunction::zeros(m));
    let jac = jacobian(&SchemeSpec::plain(SchemeFamily::NarrowBox), &g, &field).unwrap();
    // Linearisation: ½ D_m D_m² (u_{-2}) of the new level plus μ_m u_{-1} / dt.
    let h3 = 0.5 / (dx * dx * dx);
    let expected = [(-2isize, -h3), (-1, 3.0 * h3 + 0.5 / dt), (0, -3.0 * h3 + 0.5 / dt), (1, h3)];
    for r in 0..m {
        for c in 0..m {
            let off = (c as isize - r as isize + m as isize + 2).rem_euclid(m as isize) - 2;
            let want = expected.iter().find(|e| e.0 == off).map_or(0.0, |e| e.1);
            assert!((jac.get(r, c) - want).abs() <= 1e-9 * h3, "row {r} col {c}");
        }
    }
}

#[test]
fn jacobian_band_pattern() {
    for spec in all_specs() {
        for m in [spec.family.min_nodes(), 17, 24] {
            let g = grid(m, 0.3, 0.05);
            let jac = jacobian(&spec, &g, &TwoLevelField::new(wavy(m, 0.2), wavy(m, 0.9)).unwrap()).unwrap();
            assert_eq!(jac.half_bandwidth(), spec.family.half_bandwidth());
            let (lo, hi) = spec.family.stencil_offsets();
            for r in 0..m {
                for c in 0..m {
                    let off = (c as isize - r as isize).rem_euclid(m as isize);
                    let inside = (lo..=hi).any(|o| o.rem_euclid(m as isize) == off);
                    if !inside {
                        assert_eq!(jac.get(r, c), 0.0, "{} m={m} ({r},{c})", spec.label());
                    }
                }
            }
        }
    }
}

#[test]
fn colouring_separates_stencil_columns() {
    for width in [4usize, 5] {
        for m in 2 * width..40 {
            let (colours, count) = column_colours(m, width);
            assert!(colours.iter().all(|&c| c < count));
            for r in 0..m {
                let cols: Vec<usize> = (0..width).map(|k| (r + k) % m).collect();
                for i in 0..width {
                    for j in i + 1..width {
                        assert_ne!(colours[cols[i]], colours[cols[j]], "m={m} r={r}");
                    }
                }
            }
        }
    }
}

#[test]
fn conservation_law_membership() {
    assert!(ConservationLawEval::new(SchemeSpec::plain(SchemeFamily::NarrowBox), Law::Energy).is_err());
    assert!(ConservationLawEval::new(SchemeSpec::plain(SchemeFamily::EC8), Law::Momentum).is_err());
    assert!(ConservationLawEval::new(SchemeSpec::plain(SchemeFamily::MC8), Law::Momentum).is_ok());
    assert_eq!(conservation_laws(&SchemeSpec::plain(SchemeFamily::EC10)).len(), 2);
    assert_eq!(conservation_laws(&SchemeSpec::plain(SchemeFamily::Multisymplectic)).len(), 1);
}

#[test]
fn energy_density_vanishes_at_zero() {
    let g = grid(12, 0.2, 0.05);
    let eval = ConservationLawEval::new(SchemeSpec::new(SchemeFamily::EC10, 0.3).unwrap(), Law::Energy).unwrap();
    assert_eq!(eval.density(&g, &GridFunction::zeros(12)).sum(), 0.0);
}

#[test]
fn momentum_density_of_constant() {
    let g = grid(12, 0.2, 0.05);
    let c = 1.7;
    for family in [SchemeFamily::MC8, SchemeFamily::MC10] {
        let eval = ConservationLawEval::new(SchemeSpec::new(family, 0.4).unwrap(), Law::Momentum).unwrap();
        let d = eval.density(&g, &GridFunction::constant(12, c));
        assert!(d.iter().all(|&v| (v - 0.5 * c * c).abs() <= 1e-14), "{family}");
    }
}

#[test]
fn mc8_lambda_terms_are_linear_and_vanish_at_zero() {
    let (dx, dt) = (0.25, 0.04);
    let field = wavy_field(20);
    let flux = |lambda: f64| mc8::flux2(&Stencil::new(&field, Steps { dx, dt, lambda }));
    let density = |lambda: f64| mc8::density2(field.level0(), Steps { dx, dt, lambda });
    let (f0, f1, f2) = (flux(0.0), flux(0.1), flux(0.2));
    let curvature = &(&f2 - &f1.scale(2.0)) + &f0;
    assert!(curvature.max_abs() <= 1e-10 * f0.max_abs());
    assert!((&f1 - &f0).max_abs() > 1e-6);

    let v = field.level0().shift(-1).mu_m();
    let plain = v.square().scale(0.5);
    assert!((&density(0.0) - &plain).max_abs() <= 1e-15);
    let (d1, d2) = (density(0.1), density(0.2));
    let curvature = &(&d2 - &d1.scale(2.0)) + &plain;
    assert!(curvature.max_abs() <= 1e-12);
}

#[test]
fn global_invariants_use_fallback_where_needed() {
    let g = grid(20, 0.2, 0.05);
    let u = wavy(20, 0.4);
    let nb = global_invariants(&SchemeSpec::plain(SchemeFamily::NarrowBox), &g, &u);
    assert_eq!(nb.fallback, [false, true, true]);
    let ec = global_invariants(&SchemeSpec::plain(SchemeFamily::EC10), &g, &u);
    assert_eq!(ec.fallback, [false, true, false]);
    // Ten-point mass density is u itself; the eight-point one is a shifted
    // average with the same periodic sum.
    assert!((ec.get(Law::Mass) - u.sum()).abs() <= 1e-13);
    assert!((nb.get(Law::Mass) - u.sum()).abs() <= 1e-13);
    assert!((ec.get(Law::Momentum) - 0.5 * u.square().sum()).abs() <= 1e-12);
}

#[test]
fn linear_identity_quick_check() {
    // Small amplitude random-ish data: the divergence identities must hold at
    // rounding level for every preserved law.
    let g = grid(18, 0.3, 0.07);
    let field = TwoLevelField::new(wavy(18, 1.1), wavy(18, 2.3).scale(0.9)).unwrap();
    for spec in all_specs() {
        for eval in conservation_laws(&spec) {
            let res = residual(&spec, &g, &field).unwrap();
            let lhs = eval.characteristic(&g, &field) * res;
            let defect = &lhs - &eval.divergence(&g, &field);
            assert!(
                defect.max_abs() <= 1e-11 * lhs.max_abs(),
                "{} law {}: {:e} vs {:e}",
                spec.label(),
                eval.law.index(),
                defect.max_abs(),
                lhs.max_abs()
            );
        }
    }
}
