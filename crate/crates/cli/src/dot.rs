//! Graphviz output: covers only, bottom to top.

use std::fmt::Write;

use lattice_forge::order::FinitePoset;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn hasse(p: &FinitePoset, title: &str) -> String {
    let mut s = String::new();
    writeln!(s, "digraph {} {{", quote(title)).unwrap();
    writeln!(s, "  rankdir=BT;").unwrap();
    writeln!(s, "  node [shape=plaintext];").unwrap();
    for name in p.names() {
        writeln!(s, "  {};", quote(name)).unwrap();
    }
    for (a, b) in p.covers() {
        writeln!(s, "  {} -> {};", quote(p.name(a)), quote(p.name(b))).unwrap();
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use lattice_forge::order::build_poset;

    #[test]
    fn only_covers() {
        let p = build_poset(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        let d = hasse(&p, "t");
        assert_eq!(d.matches("->").count(), 2);
        assert!(!d.contains("\"a\" -> \"c\""));
    }
}
