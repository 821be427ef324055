//! CSV emission: comma separated, header row, LF line endings.
//!
//! Cells are exact rationals (`p/q`), reals with 15 significant digits,
//! `inf(sym)` for symbolic infinity, `nan` for undefined ratios, or empty
//! when a value does not exist (e.g. no minimizer).

use csv::{ReaderBuilder, Terminator, WriterBuilder};

use crate::ergodic::TrajectoryStats;
use crate::error::{Error, Result};
use crate::numeric::format::{format_rational, format_real, parse_value};
use crate::partition::PartitionSpec;
use crate::renewal::RenewalSequence;
use crate::thermo::{CurveKind, CurveTable};

pub fn write_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("cells are UTF-8")
}

/// Header and numeric cells; `None` for empty cells.
pub type Table = (Vec<String>, Vec<Vec<Option<f64>>>);

/// Parses an emitted CSV back into its header and numeric cells.
pub fn read_csv(text: &str) -> Result<Table> {
    let mut r = ReaderBuilder::new().from_reader(text.as_bytes());
    let header = r
        .headers()
        .map_err(|e| Error::domain(format!("csv header: {}", e)))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::domain(format!("csv row {}: {}", i + 1, e)))?;
        let cells = rec
            .iter()
            .map(|c| {
                if c.is_empty() {
                    Ok(None)
                } else {
                    parse_value(c).map(Some).ok_or_else(|| Error::domain(format!("csv row {}: bad cell `{}`", i + 1, c)))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(cells);
    }
    Ok((header, rows))
}

fn real_or_nan(r: Result<f64>) -> String {
    r.map(format_real).unwrap_or_else(|_| "nan".into())
}

pub fn curve_csv(table: &CurveTable) -> String {
    let spectrum = matches!(table.kind, CurveKind::TauSpectrum | CurveKind::SigmaSpectrum);
    let header: &[&str] = match table.kind {
        CurveKind::Pressure => &["u", "p", "error_bound"],
        CurveKind::FreeEnergy => &["u", "v", "error_bound"],
        _ => &["s", "value", "minimizer_u", "error_bound"],
    };
    let rows: Vec<Vec<String>> = table
        .samples
        .iter()
        .map(|s| {
            let mut row = vec![format_real(s.argument), s.value.to_string()];
            if spectrum {
                row.push(s.minimizer.map(format_real).unwrap_or_default());
            }
            row.push(format_real(s.error_bound));
            row
        })
        .collect();
    write_csv(header, &rows)
}

/// Rows `1..=n` of a renewal sequence. `w_n` is exact on the exact prefix.
pub fn renewal_csv(spec: &PartitionSpec, seq: &RenewalSequence) -> String {
    let rows: Vec<Vec<String>> = (1..=seq.len())
        .map(|n| {
            let w = match seq.exact.get(n) {
                Some(q) => format_rational(q),
                None => format_real(seq.values[n]),
            };
            vec![
                n.to_string(),
                w,
                format_real(seq.partial_w[n]),
                format_real(seq.partial_t[n]),
                real_or_nan(seq.weak_law_ratio(spec, n)),
                real_or_nan(seq.strong_law_ratio(spec, n)),
                real_or_nan(seq.gl_product(n)),
            ]
        })
        .collect();
    write_csv(&["n", "w_n", "partial_sum_w", "partial_sum_t", "weak_ratio", "strong_ratio", "gl_product"], &rows)
}

/// Running averages at each decade.
pub fn simulate_csv(stats: &TrajectoryStats) -> String {
    let rows: Vec<Vec<String>> = stats
        .decades
        .iter()
        .map(|d| {
            vec![
                d.n.to_string(),
                format_real(d.mean_digit),
                format_real(d.mean_log_digit),
                format_real(d.mean_neg_log_atom),
                format_real(d.quotient),
            ]
        })
        .collect();
    write_csv(&["n", "mean_digit", "mean_log_digit", "mean_neg_log_atom", "farey_quotient"], &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::renewal::renewal_sequence;
    use crate::numeric::format::SYMBOLIC_INFINITY;
    use crate::thermo::{linspace, pressure_curve, tau_spectrum};

    /// Every cell re-parses, and decimal cells re-print to the same text.
    fn assert_round_trip(text: &str) {
        assert!(!text.contains('\r'));
        let (header, rows) = read_csv(text).unwrap();
        assert!(rows.iter().all(|r| r.len() == header.len()));
        let mut raw = ReaderBuilder::new().from_reader(text.as_bytes());
        for rec in raw.records() {
            for cell in rec.unwrap().iter() {
                if cell.is_empty() || cell.contains('/') || cell == SYMBOLIC_INFINITY {
                    continue;
                }
                let v = parse_value(cell).unwrap();
                assert_eq!(format_real(v), cell);
            }
        }
    }

    #[test]
    fn renewal_rows() {
        let spec = PartitionSpec::harmonic();
        let seq = renewal_sequence(&spec, 4).unwrap();
        let text = renewal_csv(&spec, &seq);
        assert!(text.starts_with("n,w_n,partial_sum_w,partial_sum_t,weak_ratio,strong_ratio,gl_product\n"));
        let last = text.lines().last().unwrap();
        assert!(last.starts_with("4,251/720,"), "{}", last);
        assert_round_trip(&text);
    }

    #[test]
    fn curves_round_trip() {
        let spec = PartitionSpec::harmonic();
        let p = pressure_curve(&spec, &linspace(0.0, 2.0, 21));
        let text = curve_csv(&p);
        assert!(text.contains("inf(sym)"));
        assert_round_trip(&text);
        let t = tau_spectrum(&spec, &linspace(0.5, 3.0, 11));
        let text = curve_csv(&t);
        assert!(text.starts_with("s,value,minimizer_u,error_bound\n"));
        assert_round_trip(&text);
    }
}
