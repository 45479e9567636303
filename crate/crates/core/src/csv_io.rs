//! CSV persistence for sweep results. The header and number format are
//! part of the artifact contract: rewriting a parsed file is byte-exact.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sweep::ResultRow;

pub const CSV_HEADER: &str =
    "experiment,law,size,iterations,p_effective,metric,stderr,shots,seed,backend";

/// Format with 9 significant digits: fixed notation for moderate
/// exponents, scientific otherwise, trailing zeros trimmed.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.8e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("e-notation");
    let exp: i32 = exp.parse().expect("numeric exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    debug_assert_eq!(digits.len(), 9);

    let body = if (-4..9).contains(&exp) {
        if exp >= 0 {
            let split = exp as usize + 1;
            let int_part = &digits[..split];
            let frac = digits[split..].trim_end_matches('0');
            if frac.is_empty() {
                int_part.to_string()
            } else {
                format!("{int_part}.{frac}")
            }
        } else {
            let frac = digits.trim_end_matches('0');
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), frac)
        }
    } else {
        let frac = digits[1..].trim_end_matches('0');
        if frac.is_empty() {
            format!("{}e{exp}", &digits[..1])
        } else {
            format!("{}.{frac}e{exp}", &digits[..1])
        }
    };
    format!("{sign}{body}")
}

pub fn rows_to_csv(rows: &[ResultRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::EmptyInput {
            what: "result rows",
        });
    }
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        r.validate()?;
        let iterations = match r.iterations {
            Some(t) => t.to_string(),
            None => String::new(),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.experiment,
            r.law,
            r.size,
            iterations,
            fmt_sig9(r.p_effective),
            fmt_sig9(r.metric),
            fmt_sig9(r.stderr),
            r.shots,
            r.seed,
            r.backend,
        ));
    }
    Ok(out)
}

pub fn write_csv(rows: &[ResultRow], destination: &Path) -> Result<()> {
    let text = rows_to_csv(rows)?;
    fs::write(destination, text).map_err(|e| Error::Io {
        path: destination.display().to_string(),
        source: e,
    })
}

pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header != CSV_HEADER {
        return Err(Error::config(
            "csv",
            format!("unexpected header '{header}'"),
        ));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(Error::config(
                "csv",
                format!("line {}: expected 10 fields", i + 2),
            ));
        }
        let num = |field: &str, what: &str| -> Result<f64> {
            field
                .parse::<f64>()
                .map_err(|_| Error::config("csv", format!("line {}: bad {what} '{field}'", i + 2)))
        };
        let count = |field: &str, what: &str| -> Result<usize> {
            field
                .parse::<usize>()
                .map_err(|_| Error::config("csv", format!("line {}: bad {what} '{field}'", i + 2)))
        };
        let row = ResultRow {
            experiment: fields[0].to_string(),
            law: fields[1].to_string(),
            size: count(fields[2], "size")?,
            iterations: if fields[3].is_empty() {
                None
            } else {
                Some(count(fields[3], "iterations")?)
            },
            p_effective: num(fields[4], "p_effective")?,
            metric: num(fields[5], "metric")?,
            stderr: num(fields[6], "stderr")?,
            shots: count(fields[7], "shots")?,
            seed: fields[8].parse::<u64>().map_err(|_| {
                Error::config("csv", format!("line {}: bad seed '{}'", i + 2, fields[8]))
            })?,
            backend: fields[9].to_string(),
        };
        row.validate()
            .map_err(|e| Error::config("csv", format!("line {}: {e}", i + 2)))?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput { what: "csv rows" });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_row() -> ResultRow {
        ResultRow {
            experiment: "ghz".into(),
            law: "power".into(),
            size: 4,
            iterations: None,
            p_effective: 0.32,
            metric: 0.01679616,
            stderr: 0.0042,
            shots: 2000,
            seed: 1234567890123456789,
            backend: "trajectory".into(),
        }
    }

    #[test]
    fn sig9_formatting() {
        assert_eq!(fmt_sig9(0.0), "0");
        assert_eq!(fmt_sig9(0.08), "0.08");
        assert_eq!(fmt_sig9(0.5), "0.5");
        assert_eq!(fmt_sig9(1.0), "1");
        assert_eq!(fmt_sig9(0.01679616), "0.01679616");
        assert_eq!(fmt_sig9(0.4182119424), "0.418211942");
        assert_eq!(fmt_sig9(-0.25), "-0.25");
        assert_eq!(fmt_sig9(123456789.0), "123456789");
        assert_eq!(fmt_sig9(1234567890.0), "1.23456789e9");
        assert_eq!(fmt_sig9(0.000123456), "0.000123456");
        assert_eq!(fmt_sig9(1.5e-12), "1.5e-12");
        assert_eq!(fmt_sig9(1.0 / 3.0), "0.333333333");
    }

    #[test]
    fn header_and_row_layout() {
        let text = rows_to_csv(&[sample_row()]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(
            lines[1],
            "ghz,power,4,,0.32,0.01679616,0.0042,2000,1234567890123456789,trajectory"
        );
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn iterations_field_round_trips() {
        let mut row = sample_row();
        row.experiment = "grover".into();
        row.iterations = Some(5);
        let text = rows_to_csv(&[row.clone()]).unwrap();
        let parsed = parse_csv(&text).unwrap();
        assert_eq!(parsed[0].iterations, Some(5));
        assert_eq!(parsed[0].experiment, "grover");
    }

    #[test]
    fn round_trip_is_byte_exact() {
        let mut second = sample_row();
        second.law = "constant".into();
        second.size = 7;
        second.metric = 1.0 / 3.0;
        second.stderr = 7.7e-5;
        let text = rows_to_csv(&[sample_row(), second]).unwrap();
        let reparsed = rows_to_csv(&parse_csv(&text).unwrap()).unwrap();
        assert_eq!(text, reparsed);
    }

    #[test]
    fn refuses_empty_and_malformed() {
        assert!(rows_to_csv(&[]).is_err());
        assert!(parse_csv("").is_err());
        assert!(parse_csv("bad,header\n").is_err());
        let text = format!("{CSV_HEADER}\nghz,power,4,,x,0,0,10,1,exact\n");
        assert!(parse_csv(&text).is_err());
    }

    #[test]
    fn write_surfaces_destination_on_failure() {
        let err = write_csv(&[sample_row()], Path::new("/nonexistent-dir/out.csv")).unwrap_err();
        let Error::Io { path, .. } = err else {
            panic!("expected io error")
        };
        assert!(path.contains("nonexistent-dir"));
    }

    proptest! {
        #[test]
        fn prop_sig9_reparse_is_stable(x in -1.0e12f64..1.0e12) {
            let once = fmt_sig9(x);
            let reparsed: f64 = once.parse().unwrap();
            prop_assert_eq!(fmt_sig9(reparsed), once);
            // 9 significant digits keep at least 1e-8 relative accuracy
            if x != 0.0 {
                prop_assert!(((reparsed - x) / x).abs() < 1e-8);
            }
        }
    }
}
