//! Solution files: two lines of 0-based images, π then φ. `#` starts a comment.

use std::fmt::Write as _;
use std::path::Path;

use bap::Solution;

use crate::error::{CliError, Result};

pub fn format_solution(s: &Solution, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        writeln!(out, "# {c}").unwrap();
    }
    for p in [s.pi(), s.phi()] {
        let line: Vec<String> = p.iter().map(usize::to_string).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

pub fn parse_solution(text: &str) -> std::result::Result<Solution, String> {
    let lines: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    if lines.len() != 2 {
        return Err(format!("expected two permutation lines, found {}", lines.len()));
    }
    let parse = |line: &str| -> std::result::Result<Vec<usize>, String> {
        line.split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| format!("bad index '{t}'")))
            .collect()
    };
    Solution::new(parse(lines[0])?, parse(lines[1])?).map_err(|e| e.to_string())
}

pub fn read_solution(path: &Path) -> Result<Solution> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::data(path.display(), e))?;
    parse_solution(&text).map_err(|e| CliError::data(path.display(), e))
}

pub fn write_solution(path: &Path, s: &Solution, comments: &[String]) -> Result<()> {
    std::fs::write(path, format_solution(s, comments)).map_err(|e| CliError::data(path.display(), e))
}
