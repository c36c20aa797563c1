use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::{Graph, SetSystem};
use crate::error::{Error, Result};

/// A graph loaded from a labeled edge list, with the dense-id → label table.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<String>,
}

impl LabeledGraph {
    /// Graph whose labels are its own ids.
    pub fn unlabeled(graph: Graph) -> Self {
        let labels = (0..graph.n()).map(|i| i.to_string()).collect();
        Self { graph, labels }
    }

    pub fn id_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Reads `u v` / `u v w` lines. Labels are arbitrary tokens, assigned dense
/// ids in order of first appearance. When `weighted` is false any third
/// column is validated but ignored.
pub fn load_edge_list<R: BufRead>(reader: R, weighted: bool) -> Result<LabeledGraph> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let toks: Vec<&str> = strip_comment(&line).split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() < 2 || toks.len() > 3 {
            return Err(parse_err(lineno, format!("expected 'u v [w]', got {line:?}")));
        }
        let w = match toks.get(2) {
            Some(t) => {
                let w: f64 = t
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad weight {t:?}")))?;
                if !w.is_finite() {
                    return Err(parse_err(lineno, format!("bad weight {t:?}")));
                }
                if w < 0.0 {
                    return Err(Error::Domain(format!("line {lineno}: negative weight {w}")));
                }
                if weighted {
                    w
                } else {
                    1.0
                }
            }
            None => 1.0,
        };
        if toks[0] == toks[1] {
            return Err(Error::Domain(format!(
                "line {lineno}: self-loop at {}",
                toks[0]
            )));
        }
        let mut id = |t: &str| {
            *ids.entry(t.to_string()).or_insert_with(|| {
                labels.push(t.to_string());
                labels.len() - 1
            })
        };
        let (u, v) = (id(toks[0]), id(toks[1]));
        edges.push((u, v, w));
    }
    let graph = Graph::with_edge_weights(labels.len(), edges)?;
    Ok(LabeledGraph { graph, labels })
}

/// Reads `label weight` lines and attaches them as vertex weights. Every
/// vertex must receive a weight.
pub fn load_vertex_weights<R: BufRead>(reader: R, lg: LabeledGraph) -> Result<LabeledGraph> {
    let index: HashMap<&str, usize> = lg
        .labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let mut w = vec![f64::NAN; lg.graph.n()];
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let toks: Vec<&str> = strip_comment(&line).split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 2 {
            return Err(parse_err(lineno, "expected 'label weight'"));
        }
        let v = *index
            .get(toks[0])
            .ok_or_else(|| parse_err(lineno, format!("unknown vertex {:?}", toks[0])))?;
        w[v] = toks[1]
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad weight {:?}", toks[1])))?;
    }
    if let Some(v) = w.iter().position(|x| x.is_nan()) {
        return Err(Error::Domain(format!(
            "vertex {:?} has no weight",
            lg.labels[v]
        )));
    }
    let graph = lg.graph.with_vertex_weights(w)?;
    Ok(LabeledGraph {
        graph,
        labels: lg.labels,
    })
}

/// Header `m n`, then `n` lines listing the elements of each set. Lines
/// starting with `#` are skipped; an empty line is an empty set.
pub fn load_set_system<R: BufRead>(reader: R) -> Result<SetSystem> {
    let mut header: Option<(usize, usize)> = None;
    let mut sets = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        if line.trim_start().starts_with('#') {
            continue;
        }
        let body = strip_comment(&line);
        match header {
            None => {
                if body.trim().is_empty() {
                    continue;
                }
                let toks: Vec<usize> = body
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| parse_err(lineno, "bad header")))
                    .collect::<Result<_>>()?;
                if toks.len() != 2 {
                    return Err(parse_err(lineno, "header must be 'm n'"));
                }
                header = Some((toks[0], toks[1]));
            }
            Some((m, n)) => {
                if sets.len() == n {
                    if body.trim().is_empty() {
                        continue;
                    }
                    return Err(parse_err(lineno, format!("more than {n} set lines")));
                }
                let mut s = Vec::new();
                for t in body.split_whitespace() {
                    let x: usize = t
                        .parse()
                        .map_err(|_| parse_err(lineno, format!("bad element {t:?}")))?;
                    if x >= m {
                        return Err(Error::Domain(format!(
                            "line {lineno}: element {x} >= m = {m}"
                        )));
                    }
                    s.push(x);
                }
                sets.push(s);
            }
        }
    }
    let (m, n) = header.ok_or_else(|| parse_err(1, "missing header"))?;
    if sets.len() != n {
        return Err(parse_err(
            0,
            format!("header declares {n} sets, found {}", sets.len()),
        ));
    }
    SetSystem::new(m, sets)
}

/// Writes `u v` lines (or `u v w` when any weight differs from 1).
pub fn write_edge_list<W: Write>(mut out: W, g: &Graph, labels: Option<&[String]>) -> Result<()> {
    let weighted = g.edges().iter().any(|e| e.w != 1.0);
    let name = |v: usize| labels.map_or_else(|| v.to_string(), |l| l[v].clone());
    for e in g.edges() {
        if weighted {
            writeln!(out, "{} {} {}", name(e.u), name(e.v), e.w)?;
        } else {
            writeln!(out, "{} {}", name(e.u), name(e.v))?;
        }
    }
    Ok(())
}

pub fn write_remap_csv<W: Write>(mut out: W, labels: &[String]) -> Result<()> {
    writeln!(out, "label,id")?;
    for (i, l) in labels.iter().enumerate() {
        writeln!(out, "{l},{i}")?;
    }
    Ok(())
}

pub fn write_set_system<W: Write>(mut out: W, ss: &SetSystem) -> Result<()> {
    writeln!(out, "{} {}", ss.m(), ss.n())?;
    for s in ss.sets() {
        let line: Vec<String> = s.iter().map(usize::to_string).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn path_p3() {
        let lg = load_edge_list("0 1\n1 2\n".as_bytes(), false).unwrap();
        assert_eq!(lg.graph, named::path(3));
    }

    #[test]
    fn labels_and_weights() {
        let lg = load_edge_list("a b 2.5\n# c\nb c 1\n".as_bytes(), true).unwrap();
        assert_eq!(lg.labels, vec!["a", "b", "c"]);
        assert_eq!(lg.graph.n(), 3);
        assert_eq!(lg.graph.edge(0).w, 2.5);
        assert_eq!(lg.graph.edge(1).w, 1.0);
        assert_eq!(lg.id_of("c"), Some(2));

        let mut csv = Vec::new();
        write_remap_csv(&mut csv, &lg.labels).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "label,id\na,0\nb,1\nc,2\n");
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(
            load_edge_list("0 0\n".as_bytes(), false),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            load_edge_list("0 1\n2\n".as_bytes(), false),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            load_edge_list("0 1 -3\n".as_bytes(), true),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            load_edge_list("0 1 x\n".as_bytes(), true),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn duplicate_edges_collapse() {
        let lg = load_edge_list("1 2 4\n2 1 7\n".as_bytes(), true).unwrap();
        assert_eq!(lg.graph.m(), 1);
        assert_eq!(lg.graph.edge(0).w, 4.0);
    }

    #[test]
    fn set_systems() {
        let ss = load_set_system("3 2\n0 1\n1 2\n".as_bytes()).unwrap();
        assert_eq!(ss.set(0), &[0, 1]);
        assert_eq!(ss.set(1), &[1, 2]);
        assert!(matches!(
            load_set_system("3 1\n0 1\n".as_bytes()),
            Err(Error::Infeasible(_))
        ));
        let ss = load_set_system("6 3\n0 1 2 3\n2 3 4 5\n4 5\n".as_bytes()).unwrap();
        assert_eq!(ss.sizes(), vec![4, 4, 2]);
        assert!(matches!(
            load_set_system("3 1\n0 1 3\n".as_bytes()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn set_system_roundtrip() {
        let ss = load_set_system("6 3\n0 1 2 3\n2 3 4 5\n4 5\n".as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_set_system(&mut buf, &ss).unwrap();
        assert_eq!(load_set_system(buf.as_slice()).unwrap(), ss);
    }

    #[test]
    fn vertex_weights_file() {
        let lg = load_edge_list("a b\n".as_bytes(), false).unwrap();
        let lg = load_vertex_weights("b 5\na 1\n".as_bytes(), lg).unwrap();
        assert_eq!(lg.graph.vertex_weights().unwrap(), &[1.0, 5.0]);
    }
}
