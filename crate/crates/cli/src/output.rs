//! CSV text: comma-separated, LF line endings, one header row.

use std::fmt::Write;

/// Shortest decimal that round-trips to `x`.
pub fn full(x: f64) -> String {
    if x == 0.0 {
        // no "-0"
        return "0".into();
    }
    format!("{x}")
}

/// `x` rounded to 15 significant digits.
pub fn sig15(x: f64) -> String {
    let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
    full(rounded)
}

pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for f in fields {
            if !first {
                self.text.push(',');
            }
            first = false;
            self.text.push_str(f.as_ref());
        }
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// `key=value` pairs on one line.
pub fn kv_line(label: &str, pairs: &[(&str, String)]) -> String {
    let mut line = String::from(label);
    for (k, v) in pairs {
        let _ = write!(line, " {k}={v}");
    }
    line.push('\n');
    line
}
