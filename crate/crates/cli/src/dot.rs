use std::fmt::Write;

use antimagic::verifier::induced_weights;
use antimagic::{EdgeLabeling, Graph, Result};

/// Graphviz text for `g`. With a labeling, edges carry `label=` and
/// vertices carry their weight as `xlabel=`.
pub fn to_dot(g: &Graph, f: Option<&EdgeLabeling>, comment: Option<&str>) -> Result<String> {
    let weights = f.map(|f| induced_weights(g, f)).transpose()?;
    let mut s = String::from("graph G {\n");
    if let Some(c) = comment {
        let _ = writeln!(s, "  // {c}");
    }
    for v in 0..g.num_vertices() {
        let mut attrs = Vec::new();
        if let Some(w) = &weights {
            attrs.push(format!("xlabel=\"{}\"", w.weights[v]));
        }
        if let Some(t) = g.tag(v) {
            attrs.push(format!("tooltip=\"{t}\""));
        }
        if attrs.is_empty() {
            let _ = writeln!(s, "  {v};");
        } else {
            let _ = writeln!(s, "  {v} [{}];", attrs.join(", "));
        }
    }
    for (i, &(a, b)) in g.edges().iter().enumerate() {
        match f {
            Some(f) => {
                let _ = writeln!(s, "  {a} -- {b} [label=\"{}\"];", f.labels[i]);
            }
            None => {
                let _ = writeln!(s, "  {a} -- {b};");
            }
        }
    }
    s.push_str("}\n");
    Ok(s)
}
