//! Convergence-table CSV.

use crate::diag::ErrorReport;

pub const TABLE_HEADER: &str = "grid,l1,l1_order,linf,linf_order,wall_seconds";

/// One refinement level of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    /// Finest-grid cells per direction.
    pub grid: usize,
    pub report: ErrorReport,
    pub wall_seconds: f64,
}

/// Scientific notation with `digits` decimals and a signed two-digit
/// exponent, e.g. `3.1556e-07`.
pub fn sci(x: f64, digits: usize) -> String {
    let s = format!("{x:.digits$e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let (sign, num) = match exp.strip_prefix('-') {
                Some(n) => ('-', n),
                None => ('+', exp),
            };
            format!("{mantissa}e{sign}{num:0>2}")
        }
        None => s,
    }
}

fn order(o: Option<f64>) -> String {
    o.map(|v| format!("{v:.3}")).unwrap_or_default()
}

pub fn emit_table(rows: &[TableRow]) -> String {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.grid,
            sci(r.report.l1, 4),
            order(r.report.order_l1),
            sci(r.report.linf, 4),
            order(r.report.order_linf),
            sci(r.wall_seconds, 5),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_row() {
        let row = TableRow {
            grid: 80,
            report: ErrorReport {
                l1: 3.1556e-07,
                linf: 4.9572e-07,
                order_l1: None,
                order_linf: None,
            },
            wall_seconds: 0.998,
        };
        assert_eq!(
            emit_table(&[row]),
            format!("{TABLE_HEADER}\n80,3.1556e-07,,4.9572e-07,,9.98000e-01\n")
        );
    }

    #[test]
    fn empty_table_is_header_only() {
        assert_eq!(emit_table(&[]), format!("{TABLE_HEADER}\n"));
    }

    #[test]
    fn fifth_order_rows() {
        let rows = crate::diag::error_reports(&[(1e-6, 2e-6), (1e-6 / 32.0, 2e-6 / 32.0)]);
        let table: Vec<TableRow> = rows
            .into_iter()
            .enumerate()
            .map(|(j, report)| TableRow {
                grid: 80 << j,
                report,
                wall_seconds: 1.0,
            })
            .collect();
        let text = emit_table(&table);
        let last: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
        assert_eq!(last[2], "5.000");
        assert_eq!(last[4], "5.000");
    }

    #[test]
    fn exponent_formatting() {
        assert_eq!(sci(0.0, 4), "0.0000e+00");
        assert_eq!(sci(123456.0, 4), "1.2346e+05");
        assert_eq!(sci(-2.5e-120, 2), "-2.50e-120");
    }
}
