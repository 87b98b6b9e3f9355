use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

/// CSV table with `#` config lines and optional trailing comment lines.
pub struct Table {
    config: String,
    header: &'static str,
    rows: Vec<String>,
    trailer: Vec<String>,
}

impl Table {
    pub fn new<C: Serialize>(command: &str, config: &C, header: &'static str) -> Self {
        let json = serde_json::to_string(config).expect("config serializes");
        Self { config: format!("# schurand {command} {json}"), header, rows: Vec::new(), trailer: Vec::new() }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.rows.push(fields.iter().map(|f| quote(f)).collect::<Vec<_>>().join(","));
    }

    pub fn trailer(&mut self, label: &str, json: &serde_json::Value) {
        self.trailer.push(format!("# {label} {json}"));
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}", self.config).unwrap();
        writeln!(s, "{}", self.header).unwrap();
        for r in self.rows.iter().chain(&self.trailer) {
            writeln!(s, "{r}").unwrap();
        }
        s
    }

    /// Writes to `out`, or to stdout when no path is given. The summary goes
    /// to stdout in the first case and stderr in the second.
    pub fn emit(&self, out: Option<&Path>, summary: &str) -> std::io::Result<()> {
        match out {
            Some(path) => {
                std::fs::write(path, self.render())?;
                println!("{summary}");
            }
            None => {
                print!("{}", self.render());
                eprintln!("{summary}");
            }
        }
        Ok(())
    }
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Round-trip float formatting.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}
