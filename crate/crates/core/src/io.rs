//! Coefficient and sample files, and CSV emission.
//!
//! Coefficient files are CSV with header `n,re,im` or a JSON array of
//! `{n, re, im}`; absent indices are zero. Sample files are CSV `j,re,im`
//! with one row per grid point.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::blaschke::SweepTable;
use crate::error::{Error, Result};
use crate::kernels::KernelTable;
use crate::spectrum::{CircleSamples, FourierCoeffs};

#[derive(Debug, Deserialize)]
struct CoeffRow {
    n: i64,
    re: f64,
    im: f64,
}

#[derive(Debug, Deserialize)]
struct SampleRow {
    j: usize,
    re: f64,
    im: f64,
}

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn csv_location(source: &str, err: &csv::Error) -> String {
    match err.position() {
        Some(p) => format!("{source}:{}", p.line()),
        None => source.to_string(),
    }
}

fn read_csv_rows<T: for<'de> Deserialize<'de>>(
    reader: impl Read,
    source: &str,
    header: &[&str],
) -> Result<Vec<(u64, T)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let found: Vec<String> = rdr
        .headers()
        .map_err(|e| parse_error(csv_location(source, &e), e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if found != header {
        return Err(parse_error(
            format!("{source}:1"),
            format!(
                "expected header {}, found {}",
                header.join(","),
                found.join(",")
            ),
        ));
    }
    rdr.deserialize()
        .map(|row| {
            let line = row.as_ref().err().map(|e| csv_location(source, e));
            match row {
                Ok(v) => Ok(v),
                Err(e) => Err(parse_error(
                    line.unwrap_or_else(|| source.to_string()),
                    e.to_string(),
                )),
            }
        })
        .enumerate()
        .map(|(i, r)| r.map(|v| (i as u64 + 2, v)))
        .collect()
}

fn collect_coeffs(
    rows: impl IntoIterator<Item = (String, i64, f64, f64)>,
) -> Result<FourierCoeffs> {
    let mut seen: BTreeMap<i64, Complex64> = BTreeMap::new();
    for (loc, n, re, im) in rows {
        if !(re.is_finite() && im.is_finite()) {
            return Err(parse_error(
                loc,
                format!("non-finite coefficient at n = {n}"),
            ));
        }
        if seen.insert(n, Complex64::new(re, im)).is_some() {
            return Err(parse_error(loc, format!("duplicate index n = {n}")));
        }
    }
    if seen.is_empty() {
        return Err(parse_error("input", "no coefficients"));
    }
    Ok(FourierCoeffs::from_pairs(seen))
}

pub fn parse_coeffs_csv(reader: impl Read, source: &str) -> Result<FourierCoeffs> {
    let rows: Vec<(u64, CoeffRow)> = read_csv_rows(reader, source, &["n", "re", "im"])?;
    collect_coeffs(
        rows.into_iter()
            .map(|(line, r)| (format!("{source}:{line}"), r.n, r.re, r.im)),
    )
}

pub fn parse_coeffs_json(text: &str, source: &str) -> Result<FourierCoeffs> {
    let rows: Vec<CoeffRow> = serde_json::from_str(text).map_err(|e| {
        parse_error(
            format!("{source}:{}:{}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    collect_coeffs(
        rows.into_iter()
            .enumerate()
            .map(|(i, r)| (format!("{source}[{i}]"), r.n, r.re, r.im)),
    )
}

/// Reads a coefficient file, choosing JSON for a `.json` extension.
pub fn read_coeffs(path: &Path) -> Result<FourierCoeffs> {
    let source = path.display().to_string();
    let text = std::fs::read_to_string(path)?;
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
    {
        parse_coeffs_json(&text, &source)
    } else {
        parse_coeffs_csv(text.as_bytes(), &source)
    }
}

pub fn parse_samples_csv(reader: impl Read, source: &str) -> Result<CircleSamples> {
    let rows: Vec<(u64, SampleRow)> = read_csv_rows(reader, source, &["j", "re", "im"])?;
    let n = rows.len();
    let mut values: Vec<Option<Complex64>> = vec![None; n];
    for (line, r) in rows {
        let loc = format!("{source}:{line}");
        if r.j >= n {
            return Err(parse_error(
                loc,
                format!("index j = {} outside 0..{n}", r.j),
            ));
        }
        if values[r.j].replace(Complex64::new(r.re, r.im)).is_some() {
            return Err(parse_error(loc, format!("duplicate index j = {}", r.j)));
        }
    }
    let values: Vec<Complex64> = values
        .into_iter()
        .map(|v| v.expect("each index seen once"))
        .collect();
    CircleSamples::new(values).map_err(|e| parse_error(source, e.to_string()))
}

pub fn read_samples(path: &Path) -> Result<CircleSamples> {
    parse_samples_csv(std::fs::File::open(path)?, &path.display().to_string())
}

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::from("nan")
    }
}

fn csv_io(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

pub fn write_coeffs_csv(coeffs: &FourierCoeffs, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "re", "im"]).map_err(csv_io)?;
    for (n, v) in coeffs.iter() {
        w.write_record([n.to_string(), num(v.re), num(v.im)])
            .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `t, K, majorant, ratio`.
pub fn write_kernel_csv(table: &KernelTable, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "K", "majorant", "ratio"])
        .map_err(csv_io)?;
    for i in 0..table.t.len() {
        w.write_record([
            num(table.t[i]),
            num(table.k[i]),
            num(table.majorant[i]),
            num(table.ratio[i]),
        ])
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

/// One row per sweep cell; every row carries the fits of its own sweep.
pub fn write_sweep_csv(tables: &[(&str, &SweepTable)], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "sweep",
        "s",
        "conjugate",
        "a",
        "k",
        "one_sided",
        "two_sided",
        "second_term",
        "fit",
        "slope",
        "intercept",
        "residual",
        "target",
    ])
    .map_err(csv_io)?;
    for (label, t) in tables {
        for row in &t.rows {
            let cells = |fit: Option<&crate::blaschke::SlopeFit>| {
                vec![
                    label.to_string(),
                    num(t.s),
                    t.conjugate.to_string(),
                    num(row.a),
                    row.k.to_string(),
                    num(row.one_sided),
                    num(row.two_sided),
                    num(row.second_term),
                    fit.map_or(String::new(), |f| f.name.clone()),
                    fit.map_or(String::new(), |f| num(f.slope)),
                    fit.map_or(String::new(), |f| num(f.intercept)),
                    fit.map_or(String::new(), |f| num(f.residual)),
                    fit.and_then(|f| f.target).map_or(String::new(), num),
                ]
            };
            if t.fits.is_empty() {
                w.write_record(cells(None)).map_err(csv_io)?;
            }
            for f in &t.fits {
                w.write_record(cells(Some(f))).map_err(csv_io)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::scaling_sweep;

    #[test]
    fn csv_coefficients() {
        let c = parse_coeffs_csv("n,re,im\n3,1.0,0.0\n-1, 0.5 ,0.25\n".as_bytes(), "mem").unwrap();
        assert_eq!(c.bandwidth(), 3);
        assert_eq!(c.get(3), Complex64::new(1.0, 0.0));
        assert_eq!(c.get(-1), Complex64::new(0.5, 0.25));
        assert_eq!(c.get(0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn csv_errors_carry_location() {
        let err = parse_coeffs_csv("n,re,im\n1,1,0\n2,x,0\n".as_bytes(), "f.csv").unwrap_err();
        match err {
            Error::Parse { location, .. } => assert_eq!(location, "f.csv:3"),
            e => panic!("{e}"),
        }
        let err = parse_coeffs_csv("n,re,im\n1,1,0\n1,0,0\n".as_bytes(), "f.csv").unwrap_err();
        assert!(
            matches!(err, Error::Parse { ref location, .. } if location == "f.csv:3"),
            "{err}"
        );
        assert!(matches!(
            parse_coeffs_csv("a,b,c\n".as_bytes(), "f.csv"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_coeffs_csv("n,re,im\n".as_bytes(), "f.csv"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn json_coefficients() {
        let c = parse_coeffs_json(r#"[{"n": 2, "re": 0.5, "im": -0.5}]"#, "mem").unwrap();
        assert_eq!(c.get(2), Complex64::new(0.5, -0.5));
        assert!(matches!(
            parse_coeffs_json("[{\"n\": 1}]", "mem"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn samples_round_trip() {
        let mut text = String::from("j,re,im\n");
        for j in (0..8).rev() {
            text.push_str(&format!("{j},{},0\n", j as f64));
        }
        let s = parse_samples_csv(text.as_bytes(), "mem").unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(s.values()[5].re, 5.0);
        assert!(matches!(
            parse_samples_csv("j,re,im\n0,1,0\n1,1,0\n2,1,0\n".as_bytes(), "mem"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn coefficient_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        let c = FourierCoeffs::from_pairs([
            (-2, Complex64::new(0.1, 0.2)),
            (4, Complex64::new(1.0 / 3.0, 0.0)),
        ]);
        write_coeffs_csv(&c, std::fs::File::create(&path).unwrap()).unwrap();
        assert_eq!(read_coeffs(&path).unwrap(), c);
    }

    #[test]
    fn sweep_csv_rows() {
        let t = scaling_sweep(0.25, &[0.5, 0.6, 0.7, 0.8], &[2], false).unwrap();
        let mut out = Vec::new();
        write_sweep_csv(&[("a", &t)], &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 1 + 4 * t.fits.len());
        assert!(text.lines().nth(1).unwrap().contains("second-term-vs-gap"));
    }
}
