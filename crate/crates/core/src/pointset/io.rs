//! CSV point-set files: a `d=<d>,n=<n>` header line followed by one point per
//! line.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::PointSet;
use crate::{Error, Result};

pub fn save_csv<W: Write>(set: &PointSet, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_writer(out);
    w.write_record([format!("d={}", set.d()), format!("n={}", set.n())])?;
    for p in set.points() {
        // Display on f64 prints the shortest string that parses back to the same value.
        w.write_record(p.iter().map(|c| c.to_string()))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn save_csv_path(set: &PointSet, path: &Path) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    save_csv(set, std::io::BufWriter::new(f))
}

fn header_field(field: Option<&str>, key: &str, line: u64) -> Result<usize> {
    let field = field.ok_or_else(|| Error::Parse {
        line,
        message: format!("missing header field {key}=<int>"),
    })?;
    field
        .strip_prefix(key)
        .and_then(|s| s.strip_prefix('='))
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&v| v > 0)
        .ok_or_else(|| Error::Parse {
            line,
            message: format!("expected header field {key}=<positive int>, got {field:?}"),
        })
}

pub fn load_csv<R: Read>(input: R) -> Result<PointSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut records = rdr.records();

    let header = records.next().ok_or(Error::Parse {
        line: 1,
        message: "empty file".into(),
    })??;
    let hline = header.position().map_or(1, |p| p.line());
    if header.len() != 2 {
        return Err(Error::Parse {
            line: hline,
            message: "header must be d=<d>,n=<n>".into(),
        });
    }
    let d = header_field(header.get(0), "d", hline)?;
    let n = header_field(header.get(1), "n", hline)?;

    let mut coords = Vec::with_capacity(n * d);
    let mut rows = 0usize;
    let mut last_line = hline;
    for rec in records {
        let rec = rec?;
        let line = rec.position().map_or(last_line + 1, |p| p.line());
        last_line = line;
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != d {
            return Err(Error::Parse {
                line,
                message: format!("expected {d} fields, found {}", rec.len()),
            });
        }
        if rows == n {
            return Err(Error::Parse {
                line,
                message: format!("more than the declared {n} points"),
            });
        }
        for field in rec.iter() {
            let c: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                message: format!("not a number: {field:?}"),
            })?;
            if !(0.0..1.0).contains(&c) {
                return Err(Error::Parse {
                    line,
                    message: format!("coordinate {c} outside [0,1)"),
                });
            }
            coords.push(c);
        }
        rows += 1;
    }
    if rows != n {
        return Err(Error::Parse {
            line: last_line + 1,
            message: format!("header declares {n} points, found {rows}"),
        });
    }
    PointSet::new(d, coords)
}

pub fn load_csv_path(path: &Path) -> Result<PointSet> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    load_csv(std::io::BufReader::new(f))
}
