use heave::exterior_field::{cosimulate, exterior_energy, Cosimulation, ExteriorField, RadialGrid};
use heave::kernel::{default_table, KernelParams, KernelTable};
use heave::solid_motion::{
    derived_constants, mechanical_energy, simulate, Mode, PhysicalParams, SolverSettings,
};
use std::f64::consts::PI;
use std::sync::OnceLock;

fn table() -> &'static KernelTable {
    static T: OnceLock<KernelTable> = OnceLock::new();
    T.get_or_init(|| default_table(&KernelParams::default()).unwrap())
}

fn scale(p: &PhysicalParams, delta0: f64) -> f64 {
    0.5 * derived_constants(p).unwrap().c_hydro * delta0 * delta0
}

fn max_drift(c: &Cosimulation, subtract_work: bool) -> f64 {
    let e0 = c.trace.rows[0].e_tot.unwrap();
    c.trace
        .rows
        .iter()
        .zip(&c.wall_work)
        .map(|(r, w)| (r.e_tot.unwrap() - if subtract_work { *w } else { 0.0 } - e0).abs())
        .fold(0.0, f64::max)
}

#[test]
fn nothing_beyond_numerical_reach() {
    let p = PhysicalParams::default();
    let dc = derived_constants(&p).unwrap();
    let c = cosimulate(&p, 2.0, 10.0, 0.25, 0.5, Mode::Nonlinear).unwrap();
    let steps = c.trace.rows.len() - 1;
    let g = c.field.grid;
    // one cell per step is as far as the stencil can carry anything
    assert_eq!(c.field.max_beyond(p.r + steps as f64 * g.dr), 0.0);

    // the discrete front is dispersive: a short precursor ahead of R + v0 t
    // that has died out a few dozen cells further on
    let peak = c.field.max_beyond(p.r);
    let front = p.r + dc.v0 * c.field.t;
    assert!(c.field.max_beyond(front + 2.0 * g.dr) < 0.05 * peak);
    assert!(c.field.max_beyond(front + 40.0 * g.dr) < 1e-8 * peak);
}

#[test]
fn pulse_spreads_as_inverse_square_root() {
    let v0 = 12.0;
    let dr = 0.25;
    let g = RadialGrid::new(10.0, 700.0, dr).unwrap();
    let mut f = ExteriorField::at_rest(g);
    let dt = 0.5 * dr / v0;
    let mut n = 0usize;
    let mut samples = Vec::new();
    for r_front in [100.0, 200.0, 400.0, 600.0] {
        while f.t < (r_front - g.r_min) / v0 {
            let t = n as f64 * dt;
            let v = if t < 1.0 { (PI * t).sin().powi(2) } else { 0.0 };
            f.step(v, dt, v0).unwrap();
            n += 1;
        }
        let (j, z) = f
            .zeta
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap();
        let r = g.node(j);
        // the pulse centre left the wall at t = 0.5 s
        assert!(
            (r - (g.r_min + v0 * (f.t - 0.5))).abs() < 2.0,
            "peak at {r}"
        );
        samples.push(z.abs() * r.sqrt());
    }
    for s in &samples[1..] {
        assert!((s / samples[0] - 1.0).abs() < 0.03, "{samples:?}");
    }
}

#[test]
fn wall_elevation_follows_convolution_trace() {
    let p = PhysicalParams::default();
    for mode in [Mode::Nonlinear, Mode::Linear] {
        let c = cosimulate(&p, 1.0, 40.0, 0.25, 0.5, mode).unwrap();
        let tr = simulate(
            &p,
            table(),
            1.0,
            0.0,
            40.0,
            mode,
            &SolverSettings::default(),
        )
        .unwrap();
        let err = c
            .trace
            .rows
            .iter()
            .map(|r| (r.delta - tr.delta_at(r.t)).abs())
            .fold(0.0, f64::max);
        assert!(err < 2e-3, "{mode:?}: {err}");
    }
}

#[test]
fn conserved_energy_of_consistent_models() {
    let p = PhysicalParams::default();
    let dc = derived_constants(&p).unwrap();
    for mode in [Mode::Linear, Mode::Conservative] {
        let delta0 = 5.0;
        let c = cosimulate(&p, delta0, 40.0, 0.25, 0.5, mode).unwrap();
        assert!(max_drift(&c, false) < 1e-3 * scale(&p, delta0), "{mode:?}");
        // pointwise: solid and interior energy plus the field is ½cδ₀²
        for r in &c.trace.rows {
            let lhs = mechanical_energy(&dc, mode, r.delta, r.delta_dot) + r.e_ext.unwrap();
            assert!((lhs / scale(&p, delta0) - 1.0).abs() < 1e-3);
        }
        assert!(c.wall_work.iter().all(|&w| w == 0.0));
    }
}

#[test]
fn wall_term_work_accounts_for_nonlinear_drift() {
    let p = PhysicalParams::default();
    let delta0 = 5.0;
    let c = cosimulate(&p, delta0, 40.0, 0.25, 0.5, Mode::Nonlinear).unwrap();
    let s = scale(&p, delta0);
    assert!(max_drift(&c, false) > 0.01 * s);
    assert!(max_drift(&c, true) < 1e-3 * s);
}

#[test]
fn energy_error_is_second_order_in_dr() {
    let p = PhysicalParams::default();
    let drift = |dr: f64| {
        let c = cosimulate(&p, 1.0, 20.0, dr, 0.5, Mode::Conservative).unwrap();
        max_drift(&c, false)
    };
    let ratio = drift(0.5) / drift(0.25);
    assert!(ratio > 3.5 && ratio < 4.5, "{ratio}");
}

#[test]
fn staggered_energy_matches_plain_energy() {
    // The trace uses q at the two neighbouring half steps; the plain
    // quadratic form uses q at one of them. They differ by O(dt).
    let p = PhysicalParams::default();
    let c = cosimulate(&p, 3.0, 15.0, 0.25, 0.5, Mode::Linear).unwrap();
    let end = c.trace.rows.last().unwrap();
    let e_now = exterior_energy(&c.field, &p);
    assert!(e_now > 0.0);
    assert!((e_now - end.e_ext.unwrap()).abs() < 1e-3 * scale(&p, 3.0));
}
