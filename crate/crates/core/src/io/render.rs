use crate::different_fn::{DifferentError, PLFunction};
use crate::metric_graph::MetricGraph;
use crate::rational;
use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write;

fn escape(id: &str) -> String {
    let mut s = String::with_capacity(id.len());
    for c in id.chars() {
        if c == '"' || c == '\\' {
            s.push('\\');
        }
        s.push(c);
    }
    s
}

fn quote(id: &str) -> String {
    format!("\"{}\"", escape(id))
}

fn vertex_label(graph: &MetricGraph, id: &str) -> String {
    let v = graph.vertex(id).expect("id from the graph");
    if v.genus > 0 {
        format!("{}:{}:g={}", escape(id), v.mult, v.genus)
    } else {
        format!("{}:{}", escape(id), v.mult)
    }
}

/// Graphviz rendering, sorted by id. With `delta`, vertices also show their
/// values and edges the slope read from the first listed endpoint.
pub fn render_dot(
    graph: &MetricGraph,
    delta: Option<&PLFunction>,
) -> Result<String, DifferentError> {
    let slopes = match delta {
        Some(f) => Some(f.edge_slopes(graph)?),
        None => None,
    };
    let mut out = String::from("graph skeleton {\n  node [shape=circle];\n");
    for id in graph.vertex_ids() {
        let mut label = vertex_label(graph, id);
        if let Some(f) = delta {
            write!(label, "\\ndelta={}", rational::format(f.value(id)?)).unwrap();
        }
        writeln!(out, "  {} [label=\"{label}\"];", quote(id)).unwrap();
    }
    for id in graph.edge_ids() {
        let e = graph.edge(id)?;
        let (a, b) = graph.endpoint_ids(e);
        let mut label = rational::format(&e.length);
        if let Some(s) = &slopes {
            write!(label, "\\nslope={}", rational::format(&s[id])).unwrap();
        }
        writeln!(
            out,
            "  {} -- {} [id={}, label=\"{label}\"];",
            quote(a),
            quote(b),
            quote(id)
        )
        .unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

fn tex(id: &str) -> String {
    let mut s = String::new();
    for c in id.chars() {
        match c {
            '_' | '#' | '%' | '&' | '$' | '{' | '}' => {
                s.push('\\');
                s.push(c);
            }
            '\'' => s.push_str("$'$"),
            '*' => s.push_str("$*$"),
            _ => s.push(c),
        }
    }
    s
}

/// TikZ picture with vertices placed by breadth-first depth from the
/// smallest id. Layout is approximate.
pub fn render_tikz(
    graph: &MetricGraph,
    delta: Option<&PLFunction>,
) -> Result<String, DifferentError> {
    if let Some(f) = delta {
        f.check_graph(graph)?;
    }
    let ids: Vec<&str> = graph.vertex_ids().collect();
    let name: BTreeMap<&str, String> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| (*id, format!("v{i}")))
        .collect();

    let mut depth: BTreeMap<&str, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    depth.insert(ids[0], 0);
    queue.push_back(ids[0]);
    while let Some(v) = queue.pop_front() {
        let idx = graph.vertex_idx(v)?;
        let mut next: Vec<&str> = graph
            .incident_edges(idx)
            .iter()
            .map(|&e| graph.vertices()[graph.edges()[e].other(idx)].id.as_str())
            .collect();
        next.sort();
        for w in next {
            if !depth.contains_key(w) {
                depth.insert(w, depth[v] + 1);
                queue.push_back(w);
            }
        }
    }
    let mut rows: BTreeMap<usize, usize> = BTreeMap::new();

    let mut out =
        String::from("\\begin{tikzpicture}[every node/.style={circle,draw,inner sep=1.5pt}]\n");
    for id in &ids {
        let d = depth[id];
        let row = rows.entry(d).or_insert(0);
        let v = graph.vertex(id)?;
        let mut label = tex(id);
        if let Some(f) = delta {
            write!(label, ", $\\delta={}$", rational::format(f.value(id)?)).unwrap();
        }
        writeln!(
            out,
            "  \\node[label=above:{{\\scriptsize {label}}}] ({}) at ({}, {}) {{{}}};",
            name[id],
            d * 2,
            -(*row as i64),
            v.mult
        )
        .unwrap();
        *row += 1;
    }
    let mut seen: BTreeMap<(String, String), usize> = BTreeMap::new();
    for id in graph.edge_ids() {
        let e = graph.edge(id)?;
        let (a, b) = graph.endpoint_ids(e);
        let length = rational::format(&e.length);
        let key = (a.min(b).to_string(), a.max(b).to_string());
        let k = seen.entry(key).or_insert(0);
        let path = if e.is_loop() {
            "edge[loop right]".to_string()
        } else if *k == 0 {
            "--".to_string()
        } else {
            format!("to[bend left={}]", 20 * *k)
        };
        *k += 1;
        writeln!(
            out,
            "  \\draw ({}) {path} node[draw=none,midway,fill=white,font=\\tiny] {{${length}$}} ({});",
            name[a], name[b]
        )
        .unwrap();
    }
    out.push_str("\\end{tikzpicture}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic_reduction::{example_ii, kodaira_skeleton, KodairaType};

    #[test]
    fn single_node() {
        let g = kodaira_skeleton(KodairaType::I0).unwrap();
        let dot = render_dot(&g, None).unwrap();
        assert_eq!(
            dot,
            "graph skeleton {\n  node [shape=circle];\n  \"v0\" [label=\"v0:1:g=1\"];\n}\n"
        );
    }

    #[test]
    fn slopes_on_edges() {
        let s = example_ii().unwrap();
        let dot = render_dot(s.cover.total(), Some(&s.different)).unwrap();
        assert!(dot.contains("label=\"1/8\\nslope=6\""));
        assert!(dot.contains("\"x0'\" [label=\"x0':2:g=1\\ndelta=0\"]"));
        assert!(render_dot(s.cover.base(), Some(&s.different)).is_err());
        let tikz = render_tikz(s.cover.total(), Some(&s.different)).unwrap();
        assert!(tikz.starts_with("\\begin{tikzpicture}"));
        assert_eq!(tikz.matches("\\draw").count(), 4);
    }
}
