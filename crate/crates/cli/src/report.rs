//! Machine-readable run reports.
//!
//! Line-oriented, tab-separated: `key<TAB>value` rows plus
//! `step<TAB>i<TAB>u<TAB>v<TAB>benefit<TAB>avg` rows for greedy traces.
//! Floats are rendered in the shortest round-tripping decimal form, and
//! nothing time- or path-dependent is ever written, so equal inputs give
//! byte-identical reports.

use std::fmt::Display;
use std::fmt::Write as _;

#[derive(Debug, Clone, Default)]
pub struct MachineReport {
    body: String,
}

impl MachineReport {
    pub fn new(command: &str) -> Self {
        let mut report = MachineReport::default();
        report.kv("command", command);
        report
    }

    pub fn kv(&mut self, key: &str, value: impl Display) -> &mut Self {
        let _ = writeln!(self.body, "{key}\t{value}");
        self
    }

    /// One greedy step row.
    pub fn step(&mut self, index: usize, u: usize, v: usize, benefit: f64, avg: f64) -> &mut Self {
        let _ = writeln!(self.body, "step\t{index}\t{u}\t{v}\t{benefit}\t{avg}");
        self
    }

    /// Any other fixed-shape row: a tag followed by tab-separated fields.
    pub fn row(&mut self, tag: &str, fields: &[&dyn Display]) -> &mut Self {
        let _ = write!(self.body, "{tag}");
        for field in fields {
            let _ = write!(self.body, "\t{field}");
        }
        self.body.push('\n');
        self
    }

    pub fn render(&self) -> &str {
        &self.body
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_are_tab_separated_lines() {
        let mut report = MachineReport::new("eval");
        report.kv("n", 4).kv("average", 1.5_f64);
        report.step(1, 0, 3, 2.0, 1.25);
        report.row("class", &[&0, &3, &2.0]);
        assert_eq!(
            report.render(),
            "command\teval\nn\t4\naverage\t1.5\nstep\t1\t0\t3\t2\t1.25\nclass\t0\t3\t2\n"
        );
    }

    #[test]
    fn floats_render_shortest_round_trip() {
        let mut report = MachineReport::default();
        report.kv("x", 2.0_f64.sqrt());
        assert_eq!(report.render(), "x\t1.4142135623730951\n");
    }
}
