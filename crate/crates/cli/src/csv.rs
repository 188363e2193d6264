use std::fmt::Write;

/// 12 significant digits, fixed exponent notation.
pub(crate) fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub(crate) struct Table {
    out: String,
}

impl Table {
    pub(crate) fn new(comment: &str, columns: &[&str]) -> Self {
        let mut out = String::new();
        for line in comment.lines() {
            writeln!(out, "# {line}").unwrap();
        }
        writeln!(out, "{}", columns.join(",")).unwrap();
        Table { out }
    }

    pub(crate) fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) {
        let cells: Vec<String> = cells.into_iter().collect();
        writeln!(self.out, "{}", cells.join(",")).unwrap();
    }

    pub(crate) fn finish(self) -> String {
        self.out
    }
}
