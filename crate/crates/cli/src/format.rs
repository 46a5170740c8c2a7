//! Plain-text rendering: right-aligned tables and number formats.

use incompat_core::Rational;

/// `num/den`, always with an explicit denominator.
pub fn rat(r: &Rational) -> String {
    incompat_core::rational::display(r)
}

/// Six significant digits; scientific notation outside `[1e-4, 1e6)`.
pub fn real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        let decimals = (5 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) {
        let row: Vec<String> = cells.into_iter().map(Into::into).collect();
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, cell) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| -> String {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:>w$}"))
                .collect();
            parts.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.headers);
        out.push('\n');
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        out.push_str(&rule.join("  "));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals() {
        assert_eq!(real(0.5), "0.500000");
        assert_eq!(real(1.0 / 2f64.sqrt()), "0.707107");
        assert_eq!(real(123.456789), "123.457");
        assert_eq!(real(1e-12), "1.00000e-12");
        assert_eq!(real(0.0), "0");
        assert_eq!(real(100000.0), "100000");
    }

    #[test]
    fn table_alignment() {
        let mut t = Table::new(["a", "value"]);
        t.row(["xx", "1/6"]);
        assert_eq!(t.render(), " a  value\n--  -----\nxx    1/6\n");
    }
}
