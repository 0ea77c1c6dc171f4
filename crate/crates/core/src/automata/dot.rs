use std::collections::BTreeMap;
use std::fmt::Write;

use super::Dfa;

impl Dfa {
    /// Graphviz rendering. Nodes are `q0..qN` by state id, the initial
    /// state gets an edge from an invisible point, finals are drawn as
    /// double circles, and parallel edges share one comma-separated label.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("digraph automaton {\n");
        out.push_str("  rankdir=LR;\n");
        out.push_str("  __start [shape=point, style=invis];\n");
        for q in 0..self.state_count() {
            let shape = if self.is_final(q) { "doublecircle" } else { "circle" };
            writeln!(out, "  q{q} [shape={shape}];").unwrap();
        }
        writeln!(out, "  __start -> q{};", self.initial()).unwrap();
        let mut edges: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
        for (p, d, q) in self.transitions() {
            edges.entry((p, q)).or_default().push(d.to_string());
        }
        for ((p, q), labels) in edges {
            writeln!(out, "  q{p} -> q{q} [label=\"{}\"];", labels.join(",")).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

impl Dfa {
    /// Plain-text transition table, one line per state:
    /// `<prefix><id> <target on 0> <target on 1> ... <F|->`, where a target
    /// is `<prefix><id>` or `-` when undefined and the last column marks
    /// final states. Fields are separated by single spaces, lines end in
    /// `\n`.
    pub fn to_transition_table(&self, prefix: &str) -> String {
        let mut out = String::new();
        for q in 0..self.state_count() {
            write!(out, "{prefix}{q}").unwrap();
            for d in 0..self.alphabet_size() as crate::numeration::Digit {
                match self.next(q, d) {
                    Some(r) => write!(out, " {prefix}{r}").unwrap(),
                    None => out.push_str(" -"),
                }
            }
            out.push_str(if self.is_final(q) { " F\n" } else { " -\n" });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use crate::automata::tests::fibonacci;
    use crate::automata::Dfa;

    #[test]
    fn fibonacci_dot() {
        let expected = "digraph automaton {
  rankdir=LR;
  __start [shape=point, style=invis];
  q0 [shape=doublecircle];
  q1 [shape=doublecircle];
  __start -> q0;
  q0 -> q0 [label=\"0\"];
  q0 -> q1 [label=\"1\"];
  q1 -> q0 [label=\"0\"];
}
";
        assert_eq!(fibonacci().to_dot(), expected);
    }

    #[test]
    fn transition_table() {
        assert_eq!(fibonacci().to_transition_table("q"), "q0 q0 q1 F\nq1 q0 - F\n");
    }

    #[test]
    fn parallel_edges_are_joined() {
        let mut a = Dfa::new(2, 3, 0).unwrap();
        a.set_final(1, true);
        a.set_transition(0, 2, 1).unwrap();
        a.set_transition(0, 0, 1).unwrap();
        a.set_transition(0, 1, 0).unwrap();
        let dot = a.to_dot();
        assert!(dot.contains("  q0 -> q1 [label=\"0,2\"];\n"));
        assert!(dot.contains("  q0 [shape=circle];\n"));
    }
}
