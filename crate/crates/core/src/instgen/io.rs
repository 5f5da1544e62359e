//! Plain-text instance files.
//!
//! ```text
//! BAP <m> <n>
//! NAME <free text>          (optional)
//! C                         m rows of m integers
//! D                         n rows of n integers
//! Q                         m·m blocks in (i, j) order, each n rows of n integers (row k, column l)
//! POINTS                    optional: A, B (m lines each), U, V (n lines each) of "x y"
//! ```
//!
//! Blank lines are ignored and `#` starts a comment.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{BapError, Result};
use crate::instance::{BapInstance, PointSets};
use crate::matrix::SquareMatrix;

pub fn write_instance(inst: &BapInstance, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_instance(inst))?;
    Ok(())
}

/// Reads an instance; when the file has no `NAME` line the file stem is used.
pub fn read_instance(path: impl AsRef<Path>) -> Result<BapInstance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let inst = parse_instance(&text)?;
    if inst.name().is_empty() {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        return Ok(inst.with_name(stem));
    }
    Ok(inst)
}

pub fn format_instance(inst: &BapInstance) -> String {
    let (m, n) = (inst.m(), inst.n());
    let mut out = String::new();
    let _ = writeln!(out, "BAP {m} {n}");
    if !inst.name().is_empty() {
        let _ = writeln!(out, "NAME {}", inst.name());
    }
    let write_rows = |out: &mut String, rows: &mut dyn Iterator<Item = &[i64]>| {
        for row in rows {
            let line: Vec<String> = row.iter().map(i64::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
    };
    out.push_str("C\n");
    write_rows(&mut out, &mut inst.c().rows());
    out.push_str("D\n");
    write_rows(&mut out, &mut inst.d().rows());
    out.push_str("Q\n");
    for i in 0..m {
        for j in 0..m {
            let _ = writeln!(out, "# i={i} j={j}");
            write_rows(&mut out, &mut inst.q_block(i, j).chunks(n));
        }
    }
    if let Some(points) = inst.points() {
        out.push_str("POINTS\n");
        for (label, set) in [("A", &points.a), ("B", &points.b), ("U", &points.u), ("V", &points.v)] {
            let _ = writeln!(out, "{label}");
            for p in set {
                let _ = writeln!(out, "{} {}", p[0], p[1]);
            }
        }
    }
    out
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut last_line = 0;
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(idx, raw)| {
                last_line = idx + 1;
                let content = raw.split('#').next().unwrap_or("").trim();
                (!content.is_empty()).then_some((idx + 1, content))
            })
            .collect();
        Self {
            lines,
            pos: 0,
            last_line,
        }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    fn next(&mut self, expected: &str) -> Result<(usize, &'a str)> {
        let item = self.peek().ok_or_else(|| {
            parse_err(
                self.last_line + 1,
                format!("unexpected end of file, expected {expected}"),
            )
        })?;
        self.pos += 1;
        Ok(item)
    }

    fn header(&mut self, keyword: &str) -> Result<()> {
        let (line, content) = self.next(&format!("'{keyword}' section"))?;
        if content != keyword {
            return Err(parse_err(line, format!("expected '{keyword}', found '{content}'")));
        }
        Ok(())
    }

    fn int_row(&mut self, width: usize, what: &str) -> Result<Vec<i64>> {
        let (line, content) = self.next(what)?;
        let row: Vec<i64> = content
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i64>()
                    .map_err(|_| parse_err(line, format!("'{tok}' is not a 64-bit integer")))
            })
            .collect::<Result<_>>()?;
        if row.len() != width {
            return Err(parse_err(
                line,
                format!("expected {width} integers in {what}, found {}", row.len()),
            ));
        }
        Ok(row)
    }

    fn matrix(&mut self, keyword: &str, size: usize) -> Result<SquareMatrix> {
        self.header(keyword)?;
        let mut data = Vec::with_capacity(size * size);
        for r in 0..size {
            data.extend(self.int_row(size, &format!("row {r} of {keyword}"))?);
        }
        SquareMatrix::from_vec(size, data)
    }

    fn points(&mut self, keyword: &str, count: usize) -> Result<Vec<[f64; 2]>> {
        self.header(keyword)?;
        (0..count)
            .map(|_| {
                let (line, content) = self.next(&format!("a point of {keyword}"))?;
                let coords: Vec<f64> = content
                    .split_whitespace()
                    .map(|tok| {
                        tok.parse::<f64>()
                            .map_err(|_| parse_err(line, format!("'{tok}' is not a number")))
                    })
                    .collect::<Result<_>>()?;
                match coords.as_slice() {
                    [x, y] => Ok([*x, *y]),
                    _ => Err(parse_err(line, "a point needs exactly two coordinates")),
                }
            })
            .collect()
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> BapError {
    BapError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_instance(text: &str) -> Result<BapInstance> {
    let mut lines = Lines::new(text);
    let (header_line, header) = lines.next("'BAP <m> <n>' header")?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let (m, n) = match tokens.as_slice() {
        ["BAP", m, n] => {
            let dim = |s: &str| {
                s.parse::<usize>()
                    .ok()
                    .filter(|&v| v > 0)
                    .ok_or_else(|| parse_err(header_line, format!("'{s}' is not a positive dimension")))
            };
            (dim(m)?, dim(n)?)
        }
        _ => return Err(parse_err(header_line, "malformed header, expected 'BAP <m> <n>'")),
    };
    if m > n {
        return Err(parse_err(
            header_line,
            format!("instances must satisfy m <= n (got m={m}, n={n})"),
        ));
    }

    let mut name = String::new();
    if let Some((_, content)) = lines.peek() {
        if let Some(rest) = content.strip_prefix("NAME") {
            name = rest.trim().to_string();
            lines.pos += 1;
        }
    }

    let c = lines.matrix("C", m)?;
    let d = lines.matrix("D", n)?;
    lines.header("Q")?;
    let mut q = Vec::with_capacity(m * m * n * n);
    for i in 0..m {
        for j in 0..m {
            for k in 0..n {
                q.extend(lines.int_row(n, &format!("Q block ({i},{j}) row {k}"))?);
            }
        }
    }

    let points = match lines.peek() {
        Some((_, "POINTS")) => {
            lines.pos += 1;
            Some(PointSets {
                a: lines.points("A", m)?,
                b: lines.points("B", m)?,
                u: lines.points("U", n)?,
                v: lines.points("V", n)?,
            })
        }
        _ => None,
    };
    if let Some((line, content)) = lines.peek() {
        return Err(parse_err(line, format!("unexpected content '{content}'")));
    }

    let inst = BapInstance::new(m, n, q, c, d).map_err(|e| match e {
        BapError::Overflow => parse_err(header_line, "cost magnitude does not fit signed 64-bit arithmetic"),
        other => other,
    })?;
    let inst = inst.with_name(name);
    match points {
        Some(p) => inst.with_points(p),
        None => Ok(inst),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instgen::{fixtures, generate_one, InstanceKind};

    fn parse_line(text: &str) -> usize {
        match parse_instance(text) {
            Err(BapError::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn hand_written_one_by_one() {
        let text = "# tiny\nBAP 1 1\nC\n3\n\nD\n-2\nQ\n7 # the only q\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!((inst.m(), inst.n()), (1, 1));
        assert_eq!(inst.q(0, 0, 0, 0), 7);
        assert_eq!(inst.c()[(0, 0)], 3);
        assert_eq!(inst.d()[(0, 0)], -2);
        assert_eq!(inst.name(), "");
    }

    #[test]
    fn round_trips() {
        for inst in [
            fixtures::greedy_pathology(),
            fixtures::exchange_trap(),
            generate_one(InstanceKind::Euclidean, 2, 3, 1, 0).unwrap(),
            generate_one(InstanceKind::Normal, 3, 3, 1, 0).unwrap(),
        ] {
            let text = format_instance(&inst);
            assert_eq!(parse_instance(&text).unwrap(), inst);
        }
    }

    #[test]
    fn euclidean_files_carry_points() {
        let inst = generate_one(InstanceKind::Euclidean, 2, 2, 1, 0).unwrap();
        assert!(format_instance(&inst).contains("\nPOINTS\n"));
    }

    #[test]
    fn truncated_file_is_a_parse_error() {
        let text = format_instance(&fixtures::exchange_trap());
        let cut = &text[..text.len() - 6];
        let err = parse_instance(cut).unwrap_err();
        assert!(matches!(err, BapError::Parse { .. }), "{err}");
    }

    #[test]
    fn malformed_inputs_report_lines() {
        assert_eq!(parse_line("BAB 1 1\n"), 1);
        assert_eq!(parse_line("BAP 2 1\n"), 1);
        assert_eq!(parse_line("BAP 1 1\nC\nx\n"), 3);
        assert_eq!(parse_line("BAP 1 1\nC\n1 2\n"), 3);
        assert_eq!(parse_line("BAP 1 1\nC\n1\nD\n1\nQ\n99999999999999999999\n"), 7);
        assert_eq!(parse_line("BAP 1 1\nC\n1\nD\n1\nQ\n1\nextra\n"), 8);
        assert_eq!(parse_line("BAP 1 1\nC\n1\nX\n"), 4);
        assert_eq!(parse_line(""), 1);
    }

    #[test]
    fn magnitude_overflow_is_a_parse_error() {
        let big = i64::MAX;
        let text = format!("BAP 1 1\nC\n{big}\nD\n{big}\nQ\n0\n");
        assert_eq!(parse_line(&text), 1);
    }

    #[test]
    fn file_round_trip_uses_stem_without_name() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tiny.bap");
        std::fs::write(&path, "BAP 1 1\nC\n0\nD\n0\nQ\n4\n").unwrap();
        assert_eq!(read_instance(&path).unwrap().name(), "tiny");
        let inst = fixtures::greedy_pathology();
        let out = dir.path().join("gp.bap");
        write_instance(&inst, &out).unwrap();
        assert_eq!(read_instance(&out).unwrap(), inst);
    }
}
