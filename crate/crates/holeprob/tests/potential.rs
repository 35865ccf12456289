use std::f64::consts::{PI, TAU};

use holeprob::potential::*;
use holeprob::quad::{integrate, integrate_breaks, Tol};
use holeprob::region::Region;
use num_complex::Complex64;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn support_radius_examples() {
    let t = solve_t(&RadialField::power(2.0).unwrap()).unwrap();
    assert!(close(t, 1.0, 1e-13));
    let t = solve_t(&RadialField::power(4.0).unwrap()).unwrap();
    assert!(close(t, 0.840_896_415_253_714_5, 1e-12));
    let t = solve_level(&RadialField::power(2.0).unwrap(), 4.0).unwrap();
    assert!(close(t, 2f64.sqrt(), 1e-12));
}

#[test]
fn empty_energy_matches_power_formula() {
    assert!(close(r_empty(&RadialField::power(2.0).unwrap()).unwrap(), 0.75, 1e-12));
    for alpha in [0.5f64, 1.0, 2.0, 4.0, 7.0] {
        let h = 2.0 / alpha;
        let expected = 0.75 * h - (1.0 / alpha) * h.ln();
        let got = r_empty(&RadialField::power(alpha).unwrap()).unwrap();
        assert!(close(got, expected, 1e-10), "alpha = {alpha}: {got} vs {expected}");
    }
    assert!(close(r_empty(&RadialField::power(1.0).unwrap()).unwrap(), 0.806_852_819_440_054_7, 1e-12));
    assert!(close(r_empty(&RadialField::power(4.0).unwrap()).unwrap(), 0.548_286_795_986_469, 1e-9));
}

#[test]
fn custom_field_energy() {
    // g = r² + r⁴: T solves 2T² + 4T⁴ = 2, i.e. T² = 1/2.
    let f = RadialField::custom("r^2+r^4", |r: f64| r * r + r.powi(4), |r| 2.0 * r + 4.0 * r.powi(3), |r| {
        2.0 + 12.0 * r * r
    });
    f.validate().unwrap();
    let t2 = 0.5;
    let t = solve_t(&f).unwrap();
    assert!(close(t * t, t2, 1e-13));
    // ¼∫ r (2r + 4r³)² dr = T⁴/4 + 4T⁶/6... expanded by hand.
    let integral = t2 * t2 + 16.0 / 6.0 * t2.powi(3) + 16.0 / 8.0 * t2.powi(4);
    let expected = -t.ln() + t2 + t2 * t2 - 0.25 * integral;
    assert!(close(r_empty(&f).unwrap(), expected, 1e-12));
}

#[test]
fn equilibrium_mass_is_one() {
    for alpha in [0.5, 1.0, 2.0, 3.0] {
        let eq = EquilibriumMeasure::new(&RadialField::power(alpha).unwrap()).unwrap();
        assert!(close(eq.total_mass().unwrap(), 1.0, 1e-9), "alpha = {alpha}");
        assert!(close(eq.mass_within(eq.t), 1.0, 1e-12));
    }
}

#[test]
fn potential_flat_on_support_and_above_outside() {
    for alpha in [1.0, 2.0, 4.0] {
        let field = RadialField::power(alpha).unwrap();
        let eq = EquilibriumMeasure::new(&field).unwrap();
        let level = -eq.t.ln() + field.g(eq.t) / 2.0;
        for i in 0..20 {
            let r = eq.t * (i as f64 + 0.5) / 20.0;
            let z = Complex64::from_polar(r, 0.3 * i as f64);
            let v = eq.potential(z).unwrap() + field.g(r) / 2.0;
            assert!(close(v, level, 1e-6), "alpha {alpha}, r {r}: {v} vs {level}");
        }
        for r in [1.05, 1.5, 3.0] {
            let z = Complex64::new(r * eq.t, 0.0);
            assert!(eq.potential(z).unwrap() + field.g(z.norm()) / 2.0 >= level);
        }
    }
}

#[test]
fn potential_matches_direct_area_quadrature() {
    // Independent route: integrate log(1/|z - w|) against μ over the disk
    // without the Jensen reduction.
    let field = RadialField::power(3.0).unwrap();
    let eq = EquilibriumMeasure::new(&field).unwrap();
    for z in [Complex64::new(0.3, 0.2), Complex64::new(-0.1, 0.6)] {
        let m = z.norm();
        let tol = Tol::new(1e-11, 1e-11).with_max_intervals(20_000);
        let direct = integrate_breaks(
            |r| {
                let ang = integrate_breaks(
                    |t| -(z - Complex64::from_polar(r, t)).norm().ln(),
                    &[0.0, z.arg().rem_euclid(TAU), TAU],
                    tol,
                )
                .unwrap()
                .value;
                ang * r * eq.radial_density(r)
            },
            &[0.0, m, eq.t],
            Tol::new(1e-10, 1e-10),
        )
        .unwrap()
        .value;
        assert!(close(eq.potential(z).unwrap(), direct, 1e-8));
    }
}

#[test]
fn jensen_self_test() {
    for (z, r) in [
        (Complex64::new(0.3, 0.4), 0.2),
        (Complex64::new(0.3, 0.4), 0.9),
        (Complex64::new(-1.0, 0.0), 1.0),
        (Complex64::new(0.0, 0.0), 0.7),
    ] {
        let avg = angular_log_average(z, r).unwrap();
        assert!(close(avg, -(z.norm().max(r)).ln(), 1e-9), "z {z}, r {r}");
    }
}

#[test]
fn closed_form_table_values() {
    let cases = [
        (Region::disk(0.5).unwrap(), 0.5f64.powi(4) / 4.0),
        (Region::ellipse(0.5, 0.3).unwrap(), 0.5 * 0.15f64.powi(3) / 0.34),
        (Region::triangle(0.5).unwrap(), 0.0625 / TAU * 9.0 * 3f64.sqrt() / 80.0),
        (Region::half_disk(0.8).unwrap(), 0.4096 / 2.0 * (0.5 - 4.0 / (PI * PI))),
        (
            Region::annulus(0.5, 0.8).unwrap(),
            (0.4096 - 0.0625) / 4.0 - (0.64f64 - 0.25).powi(2) / (4.0 * 1.6f64.ln()),
        ),
        (Region::cardioid(0.1, 0.5).unwrap(), 0.0625 / 2.0 * 1.01f64.powi(2) - 0.0625 / 4.0),
    ];
    for (region, expected) in cases {
        let got = r_hole_closed_form(&region, 2.0).unwrap();
        assert!(close(got, expected, 1e-15), "{}: {got} vs {expected}", region.kind());
    }
    // Rounded plug-ins quoted alongside the table.
    let quoted = [(0.015625, 1e-12), (0.004_963_2, 1e-7), (0.001_938_3, 1e-7), (0.019_397_7, 1e-7)];
    for ((region, _), (q, tol)) in cases.iter().zip(quoted) {
        assert!(close(r_hole_closed_form(region, 2.0).unwrap(), q, tol), "{}", region.kind());
    }
    assert!(close(r_hole_closed_form(&cases[4].0, 2.0).unwrap(), 0.005_871, 2e-6));
    assert!(close(r_hole_closed_form(&cases[5].0, 2.0).unwrap(), 0.016_253_4, 5e-7));
}

#[test]
fn general_alpha_disk_and_annulus() {
    for alpha in [0.5, 1.0, 3.0] {
        let a: f64 = 0.4;
        let got = r_hole_closed_form(&Region::disk(a).unwrap(), alpha).unwrap();
        assert!(close(got, alpha / 2.0 * a.powf(2.0 * alpha) / 4.0, 1e-15));
        assert!(close(decay_constant(&Region::disk(1.0).unwrap(), alpha).unwrap(), -alpha / 8.0, 1e-15));
    }
    assert!(close(decay_constant(&Region::disk(1.0).unwrap(), 2.0).unwrap(), -0.25, 1e-15));
    assert!(close(decay_constant(&Region::disk(0.5).unwrap(), 2.0).unwrap(), -0.015625, 1e-15));
}

#[test]
fn balayage_reproduces_closed_forms() {
    let regions = [
        (Region::disk(0.5).unwrap(), 2.0),
        (Region::disk_at(Complex64::new(0.2, -0.3), 0.4).unwrap(), 2.0),
        (Region::annulus(0.5, 0.8).unwrap(), 2.0),
        (Region::ellipse(0.5, 0.3).unwrap(), 2.0),
        (Region::cardioid(0.1, 0.5).unwrap(), 2.0),
        (Region::disk(0.6).unwrap(), 3.0),
        (Region::annulus(0.2, 0.7).unwrap(), 1.0),
    ];
    for (region, alpha) in regions {
        let field = RadialField::power(alpha).unwrap();
        let cand = BalayageCandidate::for_region(&region, &field).unwrap();
        let r_u = r_hole_from_balayage(&region, &field, &cand).unwrap();
        let expected = r_empty(&field).unwrap() + r_hole_closed_form(&region, alpha).unwrap();
        assert!(close(r_u, expected, 1e-9), "{} alpha {alpha}: {r_u} vs {expected}", region.kind());
    }
}

#[test]
fn disk_balayage_example() {
    let field = RadialField::power(2.0).unwrap();
    let region = Region::disk(0.5).unwrap();
    let cand = BalayageCandidate::for_region(&region, &field).unwrap();
    assert!(close(cand.total_mass, 0.25, 1e-13));
    let r_u = r_hole_from_balayage(&region, &field, &cand).unwrap();
    assert!(close(r_u, 0.75 + 0.015625, 1e-9));
}

#[test]
fn annulus_lambda_matches_quadratic_formula() {
    let (a, b): (f64, f64) = (0.5, 0.8);
    let field = RadialField::power(2.0).unwrap();
    let cand = BalayageCandidate::for_region(&Region::annulus(a, b).unwrap(), &field).unwrap();
    let lambda_expected = ((b * b - a * a) - 2.0 * a * a * (b / a).ln()) / (2.0 * (b * b - a * a) * (b / a).ln());
    let inner_mass = cand.total_mass * 0.0 + (cand.pieces[0].density)(0.0) * TAU;
    let lambda = inner_mass / cand.total_mass;
    assert!(close(lambda, lambda_expected, 1e-13));
}

#[test]
fn moment_residuals() {
    let field = RadialField::power(2.0).unwrap();
    let disk = Region::disk(0.5).unwrap();
    let cand = BalayageCandidate::for_region(&disk, &field).unwrap();
    assert!(balayage_moment_residual(&disk, &cand, &field, 0).unwrap() < 1e-10);
    for region in [
        Region::ellipse(0.5, 0.3).unwrap(),
        Region::cardioid(0.1, 0.5).unwrap(),
        Region::cardioid(0.3, 0.4).unwrap(),
        Region::annulus(0.5, 0.8).unwrap(),
    ] {
        let cand = BalayageCandidate::for_region(&region, &field).unwrap();
        let res = balayage_moment_residual(&region, &cand, &field, 8).unwrap();
        assert!(res < 1e-8, "{}: {res:e}", region.kind());
    }
}

#[test]
fn cardioid_moments_closed_form() {
    let (a, b) = (0.3f64, 0.4f64);
    let field = RadialField::power(2.0).unwrap();
    let cand = BalayageCandidate::for_region(&Region::cardioid(a, b).unwrap(), &field).unwrap();
    for n in 0..=6u32 {
        let m = cand.integrate_complex(|w| w.powu(n)).unwrap();
        let nf = n as f64;
        let expected = b.powf(nf + 2.0) * a.powf(nf) * (nf + 1.0 + 2.0 * a * a);
        assert!(close(m.re, expected, 1e-12) && m.im.abs() < 1e-12, "n = {n}");
    }
}

#[test]
fn wrong_candidate_is_rejected() {
    let field = RadialField::power(2.0).unwrap();
    let cand = BalayageCandidate::for_region(&Region::disk(0.4).unwrap(), &field).unwrap();
    let err = r_hole_from_balayage(&Region::disk(0.5).unwrap(), &field, &cand).unwrap_err();
    assert!(matches!(err, holeprob::Error::MassMismatch { .. }));
    assert!(BalayageCandidate::for_region(&Region::triangle(0.5).unwrap(), &field).is_err());
    let quartic = RadialField::power(4.0).unwrap();
    assert!(BalayageCandidate::for_region(&Region::ellipse(0.5, 0.3).unwrap(), &quartic).is_err());
}

#[test]
fn triangle_identities() {
    let a: f64 = 0.5;
    let m = triangle_constraint_check(a).unwrap();
    assert!(close(m.edge_mass, 3f64.sqrt() * a * a / (4.0 * PI), 1e-12));
    assert!(close(m.t1mt, 0.006_891_7, 1e-7));
    assert!(m.residual < 1e-9);
    // The n = 1 identity written on the edge parameter:
    // ∫_0^1 (t + (1-t)ω)³ dt · √3a²/(10π), real part.
    let omega = Complex64::from_polar(1.0, TAU / 3.0);
    let edge = integrate(|t| (omega + (1.0 - omega) * t).powu(3).re, 0.0, 1.0, Tol::default()).unwrap().value;
    let rhs1 = edge * 3f64.sqrt() * a * a / (10.0 * PI);
    assert!(close(2.0 / 9.0 * (m.edge_mass - rhs1), m.t1mt, 1e-12));
    // Homogeneity in a².
    let m2 = triangle_constraint_check(0.25).unwrap();
    assert!(close(m.t1mt / m2.t1mt, 4.0, 1e-9));
    assert!(close(
        triangle_r_prime_from_moments(a).unwrap(),
        r_hole_closed_form(&Region::triangle(a).unwrap(), 2.0).unwrap(),
        1e-10
    ));
}

#[test]
fn halfdisk_series() {
    let a: f64 = 0.8;
    let closed = r_hole_closed_form(&Region::half_disk(a).unwrap(), 2.0).unwrap();
    let second = halfdisk_second_moment(a, HALFDISK_TERMS);
    assert!(close(second, a.powi(4) * (0.75 - 4.0 / (PI * PI)), 1e-9));
    assert!(close(halfdisk_r_prime_from_series(a, HALFDISK_TERMS).unwrap(), closed, 1e-9));
    // Sine-moment relation for the partial sum.
    for n in [1u32, 3, 5] {
        let nf = n as f64;
        let v = integrate(|t| (nf * t).sin() * halfdisk_arc_density(a, t, 2000), 0.0, PI, Tol::new(1e-10, 1e-10))
            .unwrap()
            .value;
        assert!(close(v, 2.0 * a * a / (nf * (nf + 2.0) * PI), 1e-9), "n = {n}");
    }
}

#[test]
fn beta_ensembles() {
    let disk = Region::disk(0.5).unwrap();
    let e2 = r_hole_beta(&disk, 2.0, 2.0).unwrap();
    let field = RadialField::power(2.0).unwrap();
    let cand = BalayageCandidate::for_region(&disk, &field).unwrap();
    assert!(close(e2.r_hole, r_hole_from_balayage(&disk, &field, &cand).unwrap(), 1e-12));
    assert!(close(e2.t_beta, 1.0, 1e-12));

    let beta = 4.0;
    let e4 = r_hole_beta(&disk, 2.0, beta).unwrap();
    assert!(close(e4.t_beta, 2f64.sqrt(), 1e-12));
    // Field (2/β) r² is r² after z -> sqrt(2/β) z.
    let c = 2.0 / beta;
    let oracle = r_hole_closed_form(&Region::disk(0.5 * c.sqrt()).unwrap(), 2.0).unwrap();
    assert!(close(e4.difference, oracle, 1e-9));
    assert!(close(e4.difference, 0.0625 / (beta * beta), 1e-9));

    for alpha in [1.0, 3.0] {
        let e = r_hole_beta(&disk, alpha, 2.0).unwrap();
        assert!(close(e.t_beta, (2.0f64 / alpha).powf(1.0 / alpha) * 1.0, 1e-12));
        let eb = r_hole_beta(&Region::disk(0.2).unwrap(), alpha, 3.0).unwrap();
        assert!(close(eb.t_beta, (3.0f64 / alpha).powf(1.0 / alpha), 1e-12));
    }
    let tri = r_hole_beta(&Region::triangle(0.5).unwrap(), 2.0, 4.0).unwrap();
    assert!(close(tri.difference, 0.25 * r_hole_closed_form(&Region::triangle(0.5).unwrap(), 2.0).unwrap(), 1e-15));
    assert!(r_hole_beta(&Region::ellipse(1.2, 0.3).unwrap(), 2.0, 1.0).is_err());
}

#[test]
fn numeric_route_for_every_shape() {
    for region in [
        Region::disk(0.5).unwrap(),
        Region::annulus(0.5, 0.8).unwrap(),
        Region::ellipse(0.5, 0.3).unwrap(),
        Region::cardioid(0.1, 0.5).unwrap(),
        Region::triangle(0.5).unwrap(),
        Region::half_disk(0.8).unwrap(),
    ] {
        let (v, _) = r_hole_numeric(&region, 2.0).unwrap();
        assert!(close(v, r_hole_closed_form(&region, 2.0).unwrap(), 1e-8), "{}", region.kind());
    }
}
