//! Published convergence tables and the regression check against them.

use serde::{Deserialize, Serialize};

use super::suite;
use super::{run_sweep, SolveOptions, SweepOptions, SweepResult};
use crate::basis::BoundaryConditions;
use crate::error::{Error, Result};

const Q1: &str = include_str!("../../data/convergence_q1.toml");
const Q2: &str = include_str!("../../data/convergence_q2.toml");

/// Allowed deviation of an empirical order.
pub const ORDER_TOL: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ExpectedBlock {
    pub bc: String,
    pub p: f64,
    /// `N, (δλ, order) per k`; missing orders are NaN.
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ExpectedTable {
    pub potential: String,
    pub k: Vec<usize>,
    pub block: Vec<ExpectedBlock>,
}

impl ExpectedTable {
    pub fn parse(text: &str) -> Result<Self> {
        let t: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        for b in &t.block {
            if b.rows.iter().any(|r| r.len() != 1 + 2 * t.k.len()) {
                return Err(Error::Config(format!("{} / {}: malformed row", t.potential, b.bc)));
            }
        }
        Ok(t)
    }

    pub fn grid(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.block[0].rows.iter().map(|r| r[0] as usize).collect();
        g.sort_unstable();
        g
    }
}

pub fn tables() -> Vec<ExpectedTable> {
    [Q1, Q2]
        .iter()
        .map(|t| ExpectedTable::parse(t).expect("embedded tables are well formed"))
        .collect()
}

/// Agreement to three significant digits: within half a unit in the third
/// digit of the published value.
pub fn three_digit_match(got: f64, expected: f64) -> bool {
    let exp10 = expected.abs().log10().floor();
    (got - expected).abs() <= 0.5 * 10f64.powf(exp10 - 2.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellCheck {
    pub potential: String,
    pub bc: String,
    pub k: usize,
    pub n: usize,
    pub what: &'static str,
    pub expected: f64,
    pub got: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockReport {
    pub potential: String,
    pub bc: String,
    pub p_expected: f64,
    pub p_predicted: f64,
    pub cells: Vec<CellCheck>,
    #[serde(skip)]
    pub sweep: SweepResult,
}

impl BlockReport {
    pub fn pass(&self) -> bool {
        (self.p_expected - self.p_predicted).abs() < 1e-12 && self.cells.iter().all(|c| c.pass)
    }
}

fn check_block(table: &ExpectedTable, block: &ExpectedBlock, solve: SolveOptions) -> Result<BlockReport> {
    let bc = BoundaryConditions::by_name(&block.bc)
        .ok_or_else(|| Error::Config(format!("unknown boundary condition `{}`", block.bc)))?;
    let spec = suite::lookup(&table.potential, Some(bc))
        .ok_or_else(|| Error::Config(format!("unknown potential `{}`", table.potential)))?;
    let opts = SweepOptions {
        k: table.k.clone(),
        grid: table.grid(),
        n_t: None,
        solve: SolveOptions {
            correction: false,
            ..solve
        },
    };
    let sweep = run_sweep(&spec, &opts)?;
    let mut cells = Vec::new();
    for row in &block.rows {
        let n = row[0] as usize;
        for (i, &k) in table.k.iter().enumerate() {
            let point = sweep.point(k, n);
            let (dl, ord) = (row[1 + 2 * i], row[2 + 2 * i]);
            let got = point.and_then(|p| p.delta_lambda);
            cells.push(CellCheck {
                potential: table.potential.clone(),
                bc: block.bc.clone(),
                k,
                n,
                what: "delta_lambda",
                expected: dl,
                got,
                pass: got.is_some_and(|g| three_digit_match(g, dl)),
            });
            if !ord.is_nan() {
                let got = point.and_then(|p| p.order_emp);
                cells.push(CellCheck {
                    potential: table.potential.clone(),
                    bc: block.bc.clone(),
                    k,
                    n,
                    what: "order",
                    expected: ord,
                    got,
                    pass: got.is_some_and(|g| (g - ord).abs() <= ORDER_TOL),
                });
            }
        }
    }
    Ok(BlockReport {
        potential: table.potential.clone(),
        bc: block.bc.clone(),
        p_expected: block.p,
        p_predicted: sweep.order_pred,
        cells,
        sweep,
    })
}

/// Re-runs every block of `table` and compares cell by cell.
pub fn reproduce(table: &ExpectedTable, solve: SolveOptions) -> Result<Vec<BlockReport>> {
    table.block.iter().map(|b| check_block(table, b, solve)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_tables_parse() {
        let t = tables();
        assert_eq!(t.len(), 2);
        for table in &t {
            assert_eq!(table.block.len(), 4);
            assert_eq!(table.grid(), vec![49, 99, 199, 399]);
        }
        assert_eq!(t[0].block[0].rows[0][1], 4.4416e-6);
    }

    #[test]
    fn three_digits() {
        assert!(three_digit_match(4.4449e-6, 4.4416e-6));
        assert!(!three_digit_match(4.4470e-6, 4.4416e-6));
        assert!(three_digit_match(1.5189e-10, 1.5234e-10));
        assert!(!three_digit_match(1.5290e-10, 1.5234e-10));
    }
}
