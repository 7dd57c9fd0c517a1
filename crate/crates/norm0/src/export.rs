//! Cayley-table exporters: JSON, a GAP script built from the regular
//! permutation representation, and a DOT Cayley graph.

use serde::Serialize;
use std::fmt::Write as _;

use crate::group::QuotientGroup;
use crate::mat2::ProjectiveMatrix;

/// Node cap for DOT output; larger graphs are unreadable.
pub const DOT_NODE_CAP: usize = 500;

#[derive(Serialize)]
struct CayleyJson<'a> {
    schema: &'static str,
    n: u64,
    order: usize,
    generators: Vec<GeneratorJson<'a>>,
    elements: Vec<&'a ProjectiveMatrix>,
    cayley: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct GeneratorJson<'a> {
    name: &'a str,
    index: usize,
    matrix: &'a ProjectiveMatrix,
}

/// Element quadruples plus the index table.
pub fn cayley_json(group: &QuotientGroup) -> String {
    let doc = CayleyJson {
        schema: "norm0-cayley/1",
        n: group.level().n(),
        order: group.order(),
        generators: group
            .gens()
            .iter()
            .zip(group.gen_indices())
            .map(|((name, matrix), &index)| GeneratorJson { name, index, matrix })
            .collect(),
        elements: group.elements().map(|e| &e.rep).collect(),
        cayley: (0..group.order())
            .map(|i| (0..group.order()).map(|j| group.op(i, j)).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("cayley export serializes")
}

/// 1-based cycle notation for a permutation given as an image list.
fn cycle_notation(images: &[usize]) -> String {
    let mut out = String::new();
    let mut visited = vec![false; images.len()];
    for start in 0..images.len() {
        if visited[start] || images[start] == start {
            visited[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        visited[start] = true;
        let mut next = images[start];
        while next != start {
            visited[next] = true;
            cycle.push(next);
            next = images[next];
        }
        out.push('(');
        for (k, p) in cycle.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            write!(out, "{}", p + 1).unwrap();
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// GAP script defining the quotient via its regular permutation
/// representation: one permutation per generator, 1-based cycles. Any CAS
/// can then verify orders and relations independently of this crate.
pub fn cayley_gap(group: &QuotientGroup) -> String {
    let n = group.level().n();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# Regular permutation representation of Norm(Gamma_0({n}))/Gamma_0({n})"
    );
    let _ = writeln!(out, "# order {o}, degree {o}", o = group.order());
    let perms = group.regular_representation();
    for (name, images) in &perms {
        let _ = writeln!(out, "{name} := {};", cycle_notation(images));
    }
    if perms.is_empty() {
        let _ = writeln!(out, "G := Group(());");
    } else {
        let names: Vec<&str> = perms.iter().map(|(name, _)| name.as_str()).collect();
        let _ = writeln!(out, "G := Group({});", names.join(", "));
    }
    let _ = writeln!(out, "Print(Size(G), \"\\n\");");
    out
}

/// DOT Cayley graph, one color per generator. Returns the script and
/// whether the graph was truncated at [`DOT_NODE_CAP`] nodes.
pub fn cayley_dot(group: &QuotientGroup) -> (String, bool) {
    const COLORS: [&str; 8] = [
        "red", "blue", "forestgreen", "orange", "purple", "brown", "cadetblue", "magenta",
    ];
    let shown = group.order().min(DOT_NODE_CAP);
    let truncated = shown < group.order();
    let mut out = String::new();
    let _ = writeln!(out, "digraph cayley_{} {{", group.level().n());
    if truncated {
        let _ = writeln!(
            out,
            "  // truncated to {shown} of {} nodes",
            group.order()
        );
    }
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  node [shape=circle, fontsize=10];");
    for i in 0..shown {
        let label = if i == 0 {
            "1".to_string()
        } else {
            group.word(i).to_string()
        };
        let _ = writeln!(out, "  {i} [label=\"{}\"];", label.replace('"', "'"));
    }
    for (g, ((name, _), &gi)) in group.gens().iter().zip(group.gen_indices()).enumerate() {
        let color = COLORS[g % COLORS.len()];
        for i in 0..shown {
            let j = group.op(i, gi);
            if j < shown {
                let _ = writeln!(out, "  {i} -> {j} [color=\"{color}\", label=\"{name}\"];");
            }
        }
    }
    let _ = writeln!(out, "}}");
    (out, truncated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::close_canonical;
    use crate::Level;

    #[test]
    fn gap_export_defines_permutations() {
        let g = close_canonical(&Level::new(9).unwrap()).unwrap();
        let script = cayley_gap(&g);
        assert!(script.contains("w9 := ("));
        assert!(script.contains("S3 := ("));
        assert!(script.contains("G := Group(w9, S3);"));
        // degree-12 points only
        assert!(!script.contains("13"));

        let trivial = close_canonical(&Level::new(1).unwrap()).unwrap();
        assert!(cayley_gap(&trivial).contains("G := Group(());"));
    }

    #[test]
    fn cycle_notation_examples() {
        assert_eq!(cycle_notation(&[1, 0]), "(1,2)");
        assert_eq!(cycle_notation(&[0, 1, 2]), "()");
        assert_eq!(cycle_notation(&[1, 2, 0, 4, 3]), "(1,2,3)(4,5)");
    }

    #[test]
    fn json_export_shape() {
        let g = close_canonical(&Level::new(2).unwrap()).unwrap();
        let text = cayley_json(&g);
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["order"], 2);
        assert_eq!(doc["cayley"], serde_json::json!([[0, 1], [1, 0]]));
        assert_eq!(doc["elements"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn dot_export_caps_nodes() {
        let g = close_canonical(&Level::new(48).unwrap()).unwrap();
        let (script, truncated) = cayley_dot(&g);
        assert!(!truncated);
        assert!(script.contains("digraph cayley_48"));
        // one w16-colored edge per node
        assert_eq!(script.matches("color=\"red\"").count(), 48);

        let big = close_canonical(&Level::new(576).unwrap()).unwrap();
        let (script, truncated) = cayley_dot(&big);
        assert!(truncated);
        assert!(script.contains("truncated to 500"));
    }
}
