//! User files and CSV formatting.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Point2D;

/// Format with 6 significant digits, `%g` style.
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: i32 = 6;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, e) = sci.split_once('e').expect("scientific format");
    let exp: i32 = e.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Parse a user file: two numeric columns (x y, meters) per line, separated
/// by whitespace or a comma. Blank lines and lines starting with `#` are
/// skipped.
pub fn parse_users(text: &str, path: &Path) -> Result<Vec<Point2D>> {
    let mut users = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message,
        };
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        if fields.len() != 2 {
            return Err(err(format!("expected 2 columns, found {}", fields.len())));
        }
        let mut xy = [0.0; 2];
        for (slot, field) in xy.iter_mut().zip(&fields) {
            *slot = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(format!("`{field}` is not a finite number")))?;
        }
        users.push(Point2D::new(xy[0], xy[1]));
    }
    Ok(users)
}

pub fn read_users(path: &Path) -> Result<Vec<Point2D>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_users(&text, path)
}

/// Render users in the format [`parse_users`] reads. Coordinates are written
/// with round-trip precision; `header` lines are emitted as `#` comments.
pub fn format_users(users: &[Point2D], header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    for u in users {
        let _ = writeln!(out, "{} {}", u.x, u.y);
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(25.5), "25.5");
        assert_eq!(fmt_sig(42.438557), "42.4386");
        assert_eq!(fmt_sig(-70.0), "-70");
        assert_eq!(fmt_sig(998.026661), "998.027");
        assert_eq!(fmt_sig(999999.7), "1e6");
        assert_eq!(fmt_sig(1234567.0), "1.23457e6");
        assert_eq!(fmt_sig(0.000123456789), "0.000123457");
        assert_eq!(fmt_sig(1.5e-7), "1.5e-7");
    }

    #[test]
    fn parses_comments_and_separators() {
        let text = "# header\n\n1 2\n3.5,\t-4\n  # indented comment\n5e2 6\n";
        let users = parse_users(text, Path::new("u.txt")).unwrap();
        assert_eq!(
            users,
            vec![
                Point2D::new(1.0, 2.0),
                Point2D::new(3.5, -4.0),
                Point2D::new(500.0, 6.0)
            ]
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_users("1 2\n# c\n3 x\n", Path::new("u.txt")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_users("1 2 3\n", Path::new("u.txt")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_users("1 inf\n", Path::new("u.txt")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    proptest! {
        #[test]
        fn user_files_round_trip(pts in prop::collection::vec((-1e7f64..1e7, -1e7f64..1e7), 0..40)) {
            let users: Vec<Point2D> = pts.into_iter().map(Point2D::from).collect();
            let text = format_users(&users, &["seed 1".to_string()]);
            prop_assert_eq!(parse_users(&text, Path::new("p")).unwrap(), users);
        }

        #[test]
        fn sig_formatting_keeps_six_digits(x in -1e9f64..1e9) {
            let parsed: f64 = fmt_sig(x).parse().unwrap();
            prop_assert!((parsed - x).abs() <= 5e-6 * x.abs() + 1e-300);
        }
    }
}
