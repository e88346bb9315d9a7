//! CSV emission. Numbers use `{:.16e}` (17 significant digits, round-trips
//! every `f64`); missing values are empty fields.

use crate::exterior_field::Cosimulation;
use crate::kernel::KernelTable;
use crate::solid_motion::{mechanical_energy, DerivedConstants, SimTrace};
use std::io::{self, Write};

pub const TRACE_HEADER: &str = "t,delta,delta_dot,delta_ddot,zeta_e_R,h_w,E_sol,E_int,E_ext,E_tot";

pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

/// `t,F0,F_phys,tail_flag`: `t` is read both in units of `R/v₀` (for `F0`)
/// and in seconds (for `F_phys = F₀(t/τ)`).
pub fn write_kernel(w: &mut dyn Write, table: &KernelTable, tau: f64) -> io::Result<()> {
    writeln!(w, "t,F0,F_phys,tail_flag")?;
    for (k, f0) in table.values.iter().enumerate() {
        let t = table.time(k);
        writeln!(
            w,
            "{},{},{},{}",
            fmt_num(t),
            fmt_num(*f0),
            fmt_num(table.eval(t / tau)),
            u8::from(table.is_tail(k))
        )?;
    }
    Ok(())
}

pub fn write_trace(w: &mut dyn Write, trace: &SimTrace) -> io::Result<()> {
    writeln!(w, "{TRACE_HEADER}")?;
    for r in &trace.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_num(r.t),
            fmt_num(r.delta),
            fmt_num(r.delta_dot),
            fmt_num(r.delta_ddot),
            fmt_num(r.zeta_e_r),
            fmt_num(r.h_w),
            fmt_num(r.e_sol),
            fmt_num(r.e_int),
            fmt_opt(r.e_ext),
            fmt_opt(r.e_tot)
        )?;
    }
    Ok(())
}

/// Energy budget of a co-simulation. `residual` is the conserved-energy
/// identity `(½(m+m_a)δ̇² + ½cδ² + E_ext − W)/(½cδ₀²) − 1`, `W` the work of the
/// `b/h_e²` wall term.
pub fn write_energy(
    w: &mut dyn Write,
    c: &Cosimulation,
    dc: &DerivedConstants,
    scale: f64,
) -> io::Result<()> {
    writeln!(w, "t,E_sol,E_int,E_ext,E_tot,wall_work,residual")?;
    for (r, work) in c.trace.rows.iter().zip(&c.wall_work) {
        let e_ext = r.e_ext.unwrap_or(0.0);
        let conserved = mechanical_energy(dc, c.trace.mode, r.delta, r.delta_dot) + e_ext - work;
        let residual = if scale > 0.0 {
            conserved / scale - 1.0
        } else {
            conserved
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            fmt_num(r.t),
            fmt_num(r.e_sol),
            fmt_num(r.e_int),
            fmt_num(e_ext),
            fmt_opt(r.e_tot),
            fmt_num(*work),
            fmt_num(residual)
        )?;
    }
    Ok(())
}
