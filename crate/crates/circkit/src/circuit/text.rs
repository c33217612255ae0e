//! Line-oriented text format for circuits.
//!
//! ```text
//! field Q
//! input x1
//! input x2
//! one e
//! g = + 1:x1 2:x2
//! h = * 1:g 1:g
//! output h
//! ```
//!
//! `#` starts a comment line; blank lines are skipped. Gate lines may
//! reference nodes declared later (two-pass resolution). The serializer
//! emits declarations in a stable topological order and parses back
//! bit-exactly from its own output.

use std::collections::BTreeMap;

use crate::algebra::scalar::parse_scalar;
use crate::algebra::text::parse_field_spec;
use crate::circuit::{Circuit, NodeKind};
use crate::error::{Error, Result};

const KEYWORDS: [&str; 4] = ["field", "input", "one", "output"];

fn err_at(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        msg: msg.into(),
    }
}

fn check_name(name: &str, ln: usize) -> Result<()> {
    if name.is_empty() || name.contains(':') || name.contains(char::is_whitespace) {
        return Err(err_at(ln, format!("bad node name `{name}`")));
    }
    if KEYWORDS.contains(&name) {
        return Err(err_at(ln, format!("`{name}` is a reserved word")));
    }
    Ok(())
}

enum Decl {
    Input(String),
    One(String),
    Gate {
        name: String,
        product: bool,
        edges: Vec<(String, String)>, // (label text, child name)
    },
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut field = None;
    let mut decls: Vec<(usize, Decl)> = Vec::new();
    let mut output_names: Vec<(usize, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("field ") {
            if field.is_some() {
                return Err(err_at(ln, "duplicate field line"));
            }
            field = Some(parse_field_spec(rest.trim()).map_err(|e| match e {
                Error::Syntax { msg, .. } => err_at(ln, msg),
                other => other,
            })?);
            continue;
        }
        if let Some(rest) = line.strip_prefix("input ") {
            let name = rest.trim();
            check_name(name, ln)?;
            decls.push((ln, Decl::Input(name.to_string())));
            continue;
        }
        if let Some(rest) = line.strip_prefix("one ") {
            let name = rest.trim();
            check_name(name, ln)?;
            decls.push((ln, Decl::One(name.to_string())));
            continue;
        }
        if let Some(rest) = line.strip_prefix("output") {
            if !rest.starts_with(char::is_whitespace) {
                return Err(err_at(ln, format!("unrecognized line `{line}`")));
            }
            for name in rest.split_whitespace() {
                check_name(name, ln)?;
                output_names.push((ln, name.to_string()));
            }
            continue;
        }
        // gate line: `<name> = +|* <label>:<child> ...`
        let (name, rest) = match line.split_once('=') {
            Some((n, r)) => (n.trim(), r.trim()),
            None => return Err(err_at(ln, format!("unrecognized line `{line}`"))),
        };
        check_name(name, ln)?;
        let mut parts = rest.split_whitespace();
        let product = match parts.next() {
            Some("+") => false,
            Some("*") => true,
            _ => return Err(err_at(ln, "expected `+` or `*` after `=`")),
        };
        let mut edges = Vec::new();
        for spec in parts {
            let (label, child) = spec
                .split_once(':')
                .ok_or_else(|| err_at(ln, format!("bad edge `{spec}`, expected label:child")))?;
            edges.push((label.to_string(), child.to_string()));
        }
        decls.push((
            ln,
            Decl::Gate {
                name: name.to_string(),
                product,
                edges,
            },
        ));
    }

    let field = field.ok_or_else(|| err_at(0, "missing `field ...` line"))?;
    let mut circuit = Circuit::new(field);
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();

    for (ln, decl) in &decls {
        let name: &str = match decl {
            Decl::Input(n) | Decl::One(n) => n,
            Decl::Gate { name, .. } => name,
        };
        let idx = match decl {
            Decl::Input(n) => circuit.add_input(n.clone()),
            Decl::One(n) => circuit.add_node(NodeKind::One, n.clone()),
            Decl::Gate { name, product, .. } => {
                let kind = if *product {
                    NodeKind::Product
                } else {
                    NodeKind::Sum
                };
                circuit.add_node(kind, name.clone())
            }
        };
        if index.insert(name, idx).is_some() {
            return Err(err_at(*ln, format!("duplicate node name `{name}`")));
        }
    }

    for (ln, decl) in &decls {
        if let Decl::Gate { name, edges, .. } = decl {
            let parent = index[name.as_str()];
            for (label_text, child_name) in edges {
                let child = *index
                    .get(child_name.as_str())
                    .ok_or_else(|| Error::DanglingReference(child_name.clone()))?;
                let label = parse_scalar(label_text, field)
                    .map_err(|_| err_at(*ln, format!("bad edge label `{label_text}`")))?;
                circuit.add_edge(child, parent, label)?;
            }
        }
    }

    let mut outputs = Vec::with_capacity(output_names.len());
    for (_, name) in &output_names {
        let idx = *index
            .get(name.as_str())
            .ok_or_else(|| Error::DanglingReference(name.clone()))?;
        outputs.push(idx);
    }
    circuit.set_outputs(outputs)?;
    circuit.validate()?;
    Ok(circuit)
}

pub fn serialize_circuit(c: &Circuit) -> String {
    let order = c.topo_order().expect("valid circuit");
    let mut out = String::new();
    out.push_str(&format!("field {}\n", c.field()));
    for &v in &order {
        let node = &c.nodes()[v];
        match &node.kind {
            NodeKind::Input(_) => out.push_str(&format!("input {}\n", node.name)),
            NodeKind::One => out.push_str(&format!("one {}\n", node.name)),
            NodeKind::Sum | NodeKind::Product => {
                let op = if matches!(node.kind, NodeKind::Sum) {
                    '+'
                } else {
                    '*'
                };
                out.push_str(&format!("{} = {op}", node.name));
                for &(child, ref label) in &node.in_edges {
                    out.push_str(&format!(" {label}:{}", c.nodes()[child].name));
                }
                out.push('\n');
            }
        }
    }
    if !c.outputs().is_empty() {
        out.push_str("output");
        for &o in c.outputs() {
            out.push_str(&format!(" {}", c.nodes()[o].name));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{FieldTag, Scalar};
    use std::collections::BTreeMap as Map;

    #[test]
    fn two_input_sum_parses() {
        let c = parse_circuit("field Q\ninput x1\ninput x2\ng = + 1:x1 1:x2\noutput g\n").unwrap();
        assert_eq!(c.num_nodes(), 3);
        assert_eq!(c.size(), 2);
        let mut pt = Map::new();
        pt.insert("x1".into(), Scalar::from_i64(2, FieldTag::Rational));
        pt.insert("x2".into(), Scalar::from_i64(5, FieldTag::Rational));
        assert_eq!(
            c.evaluate(&pt).unwrap(),
            vec![Scalar::from_i64(7, FieldTag::Rational)]
        );
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let src = "field Q\ninput x11\ninput x12\ninput x21\ninput x22\np1 = * 1:x11 1:x22\np2 = * 1:x12 1:x21\ng = + 1:p1 1:p2\noutput g\n";
        let c = parse_circuit(src).unwrap();
        let text = serialize_circuit(&c);
        assert_eq!(text, src);
        assert_eq!(parse_circuit(&text).unwrap(), c);
    }

    #[test]
    fn forward_references_resolve() {
        let src = "field Q\ng = + 1:x 1:h\nh = * 2:x 1:x\ninput x\noutput g\n";
        let c = parse_circuit(src).unwrap();
        // g = x + 2x^2 at x = 3 → 21
        let mut pt = Map::new();
        pt.insert("x".into(), Scalar::from_i64(3, FieldTag::Rational));
        assert_eq!(
            c.evaluate(&pt).unwrap(),
            vec![Scalar::from_i64(21, FieldTag::Rational)]
        );
    }

    #[test]
    fn undefined_child_is_dangling() {
        let r = parse_circuit("field Q\ninput x\ng = + 1:nope\noutput g\n");
        assert_eq!(r, Err(Error::DanglingReference("nope".into())));
    }

    #[test]
    fn cycle_detected() {
        let r = parse_circuit("field Q\na = + 1:b\nb = + 1:a\noutput a\n");
        assert_eq!(r, Err(Error::CycleDetected));
    }

    #[test]
    fn zero_labels_dropped_at_parse() {
        let c = parse_circuit("field Q\ninput x\ng = + 0:x 3:x\noutput g\n").unwrap();
        assert_eq!(c.size(), 1);
    }

    #[test]
    fn rational_and_prime_labels() {
        let c = parse_circuit("field F7\ninput x\ng = + 1/2:x\noutput g\n").unwrap();
        // 1/2 over F7 = 4
        let mut pt = Map::new();
        pt.insert("x".into(), Scalar::from_i64(1, FieldTag::prime(7).unwrap()));
        assert_eq!(
            c.evaluate(&pt).unwrap(),
            vec![Scalar::from_i64(4, FieldTag::prime(7).unwrap())]
        );
    }

    #[test]
    fn syntax_errors_have_lines() {
        match parse_circuit("field Q\ninput x\ng = % 1:x\n") {
            Err(Error::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }
}
