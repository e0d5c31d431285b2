//! CSV emission. All files are UTF-8 with LF line endings and every number
//! is printed with 17 significant digits, so parsing the file back
//! reproduces the binary values exactly.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use mollow_core::SpectrumSeries64;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `omega_over_gamma,value` rows; the frequency axis is multiplied by
/// `gamma_scale` (1 by default, i.e. axes stay in units of gamma).
pub fn write_spectrum(
    w: &mut dyn Write,
    series: &SpectrumSeries64,
    gamma_scale: f64,
) -> Result<()> {
    writeln!(w, "omega_over_gamma,value")?;
    for (omega, value) in series.grid.points().iter().zip(&series.values) {
        writeln!(w, "{},{}", fmt_f64(omega * gamma_scale), fmt_f64(*value))?;
    }
    Ok(())
}

/// Matrix CSV for phase sweeps: the header row carries the frequency axis,
/// the first column the phase in units of pi.
pub fn write_sweep(
    w: &mut dyn Write,
    phis_over_pi: &[f64],
    rows: &[SpectrumSeries64],
    gamma_scale: f64,
) -> Result<()> {
    let grid = rows[0].grid.points();
    let mut header = String::from("phi_over_pi");
    for omega in grid {
        header.push(',');
        header.push_str(&fmt_f64(omega * gamma_scale));
    }
    writeln!(w, "{header}")?;
    for (phi, series) in phis_over_pi.iter().zip(rows) {
        let mut line = fmt_f64(*phi);
        for value in &series.values {
            line.push(',');
            line.push_str(&fmt_f64(*value));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn write_rates(w: &mut dyn Write, rows: &[(&str, f64)]) -> Result<()> {
    writeln!(w, "quantity,value_over_gamma")?;
    for (name, value) in rows {
        writeln!(w, "{name},{}", fmt_f64(*value))?;
    }
    Ok(())
}

/// Open the output sink: a file when a path is given, stdout otherwise.
pub fn open_sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) => {
            let f = std::fs::File::create(p)
                .with_context(|| format!("cannot write output file {}", p.display()))?;
            Ok(Box::new(std::io::BufWriter::new(f)))
        }
        None => Ok(Box::new(std::io::BufWriter::new(std::io::stdout()))),
    }
}
