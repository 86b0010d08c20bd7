//! CSV and JSON serialization of sweep results.

use std::io::Write;

use serde::Serialize;

use super::{OrderFit, Reference, SweepResult};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 10] = [
    "problem",
    "k",
    "N",
    "lambda",
    "mu",
    "rho",
    "rel_err_lambda",
    "rel_err_mu",
    "order_emp",
    "order_pred",
];

/// 17 significant digits; empty for missing values.
fn num(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x:.16e}"),
        Some(x) => format!("{x}"),
        None => String::new(),
    }
}

pub fn write_csv<W: Write>(results: &[SweepResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for res in results {
        for p in &res.points {
            w.write_record([
                res.problem.clone(),
                p.k.to_string(),
                p.n.to_string(),
                num(p.lambda),
                num(p.mu),
                num(p.rho),
                num(p.rel_err_lambda),
                num(p.rel_err_mu),
                num(p.order_emp),
                num(Some(p.order_pred)),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    problem: &'a str,
    grid: &'a [usize],
    k: &'a [usize],
    n_t: Option<usize>,
    order_pred: f64,
    reference: &'a [Reference],
    fits: &'a [OrderFit],
    failures: Vec<String>,
}

/// One JSON object per problem with the reference values and order fits.
pub fn write_json<W: Write>(results: &[SweepResult], mut out: W) -> Result<()> {
    let summaries: Vec<Summary<'_>> = results
        .iter()
        .map(|r| Summary {
            problem: &r.problem,
            grid: &r.grid,
            k: &r.k,
            n_t: r.n_t,
            order_pred: r.order_pred,
            reference: &r.reference,
            fits: &r.fits,
            failures: r
                .points
                .iter()
                .filter_map(|p| p.error.as_ref().map(|e| format!("k={} N={}: {e}", p.k, p.n)))
                .collect(),
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &summaries).map_err(|e| Error::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}
