//! Line-oriented `key: value` reports with a fixed header.

use std::fmt::Write;

use metcoh_core::rational::fmt_rational;
use metcoh_core::Rational;

pub struct Header {
    pub command: &'static str,
    pub scheme: String,
    pub seed: u64,
    pub mode: String,
    pub certified_only: bool,
}

pub struct Report {
    header: Header,
    lines: Vec<String>,
    certified: bool,
}

impl Report {
    pub fn new(header: Header) -> Self {
        Report { header, lines: Vec::new(), certified: true }
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("{key}: {value}"));
    }

    pub fn rational(&mut self, key: &str, q: &Rational) {
        self.kv(key, fmt_rational(q));
    }

    /// A search result; heuristic values are withheld under `--certified-only`.
    pub fn searched(&mut self, key: &str, q: Option<&Rational>, certified: bool) {
        self.certified &= certified;
        let shown = match q {
            None => "none".to_string(),
            Some(_) if !certified && self.header.certified_only => "withheld (not certified)".to_string(),
            Some(q) => fmt_rational(q),
        };
        self.kv(key, shown);
        self.kv(&format!("{key}.certified"), certified);
    }

    pub fn uncertified(&mut self) {
        self.certified = false;
    }

    pub fn float(&mut self, key: &str, v: f64) {
        self.kv(key, fmt_float(v));
    }

    /// A multi-line value, each line indented by two spaces.
    pub fn block(&mut self, key: &str, text: &str) {
        self.lines.push(format!("{key}:"));
        for line in text.lines() {
            self.lines.push(format!("  {line}"));
        }
    }

    /// The cochain attaining a search result, withheld with its value.
    pub fn witness(&mut self, key: &str, text: &str, certified: bool) {
        if certified || !self.header.certified_only {
            self.block(key, text);
        }
    }

    pub fn section(&mut self, name: &str) {
        self.lines.push(format!("[{name}]"));
    }

    pub fn render(&self) -> String {
        let h = &self.header;
        let mut out = String::new();
        let _ = writeln!(out, "tool: metcoh {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "command: {}", h.command);
        let _ = writeln!(out, "scheme: {}", h.scheme);
        let _ = writeln!(out, "normalization: each degree normalized to mass 1");
        let _ = writeln!(out, "seed: {}", h.seed);
        let _ = writeln!(out, "mode: {}", h.mode);
        let _ = writeln!(out, "certified-only: {}", h.certified_only);
        let _ = writeln!(out, "certified: {}", self.certified);
        out.push_str("---\n");
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }
}

/// Twelve decimals, with values that round to zero printed as `0`.
pub fn fmt_float(v: f64) -> String {
    let s = format!("{v:.12}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0".to_string()
    } else {
        s
    }
}
