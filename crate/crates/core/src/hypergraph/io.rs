//! Plain-text hypergraph files.
//!
//! Plain format: a header line `s n m`, then `m` lines each holding `s`
//! strictly increasing 1-based vertex ids separated by single spaces.
//! K-partite format: header `s n k m`, then `m` lines of `s` vertices written
//! `part:index` (both 1-based) with strictly increasing parts.
//! Lines end in LF and there are no comments.

use std::io::{BufRead, Write};

use super::{EdgeIndex, Hypergraph, KPartiteHypergraph};
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn numbers<const K: usize>(line: &str, lineno: usize) -> Result<[usize; K]> {
    let fields: Vec<&str> = line.split(' ').collect();
    if fields.len() != K {
        return Err(parse_err(lineno, format!("expected {K} fields, found {}", fields.len())));
    }
    let mut out = [0; K];
    for (o, f) in out.iter_mut().zip(&fields) {
        *o = f
            .parse()
            .map_err(|_| parse_err(lineno, format!("`{f}` is not a non-negative integer")))?;
    }
    Ok(out)
}

fn read_lines(text: &str) -> Vec<&str> {
    let mut lines: Vec<&str> = text.split('\n').collect();
    if lines.last() == Some(&"") {
        lines.pop();
    }
    lines
}

fn check_count(lines: &[&str], m: usize) -> Result<()> {
    let body = lines.len() - 1;
    if body < m {
        return Err(parse_err(lines.len() + 1, format!("expected {m} edge lines, found {body}")));
    }
    if body > m {
        return Err(parse_err(m + 2, format!("unexpected line after {m} edges")));
    }
    Ok(())
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let lines = read_lines(text);
    let header = lines.first().ok_or_else(|| parse_err(1, "missing header"))?;
    let [s, n, m] = numbers::<3>(header, 1)?;
    if s < 2 {
        return Err(parse_err(1, "uniformity must be at least 2"));
    }
    check_count(&lines, m)?;
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines[1..].iter().enumerate() {
        let lineno = i + 2;
        let ids: Vec<usize> = line
            .split(' ')
            .map(|f| f.parse::<usize>().map_err(|_| parse_err(lineno, format!("`{f}` is not a vertex id"))))
            .collect::<Result<_>>()?;
        if ids.len() != s {
            return Err(parse_err(lineno, format!("expected {s} vertices, found {}", ids.len())));
        }
        if ids.iter().any(|&v| v == 0 || v > n) {
            return Err(parse_err(lineno, format!("vertex ids must lie in 1..={n}")));
        }
        if ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(parse_err(lineno, "vertex ids must be strictly increasing"));
        }
        edges.push(ids.into_iter().map(|v| v - 1).collect::<Vec<_>>());
    }
    let mut sorted = edges.clone();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        let lineno = edges.iter().rposition(|e| *e == w[0]).unwrap() + 2;
        return Err(parse_err(lineno, "duplicate edge"));
    }
    Hypergraph::from_edges(n, s, edges)
}

pub fn read_hypergraph<R: BufRead>(mut reader: R) -> Result<Hypergraph> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_hypergraph(&text)
}

pub fn write_hypergraph<W: Write>(mut w: W, g: &Hypergraph) -> Result<()> {
    writeln!(w, "{} {} {}", g.s(), g.n(), g.edge_count())?;
    for e in g.edges() {
        let line: Vec<String> = e.iter().map(|&v| (v + 1).to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn parse_kpartite(text: &str) -> Result<KPartiteHypergraph> {
    let lines = read_lines(text);
    let header = lines.first().ok_or_else(|| parse_err(1, "missing header"))?;
    let [s, n, k, m] = numbers::<4>(header, 1)?;
    let index = EdgeIndex::new(n, k, s).map_err(|e| parse_err(1, e.to_string()))?;
    check_count(&lines, m)?;
    let mut g = KPartiteHypergraph::empty(index);
    for (i, line) in lines[1..].iter().enumerate() {
        let lineno = i + 2;
        let mut verts = Vec::with_capacity(s);
        for tok in line.split(' ') {
            let (part, idx) = tok
                .split_once(':')
                .ok_or_else(|| parse_err(lineno, format!("`{tok}` is not of the form part:index")))?;
            let bad = || parse_err(lineno, format!("`{tok}` is not of the form part:index"));
            let part: usize = part.parse().map_err(|_| bad())?;
            let idx: usize = idx.parse().map_err(|_| bad())?;
            if part == 0 || part > k || idx == 0 || idx > n {
                return Err(parse_err(lineno, format!("`{tok}` outside parts 1..={k}, indices 1..={n}")));
            }
            verts.push((part - 1, idx - 1));
        }
        if verts.len() != s {
            return Err(parse_err(lineno, format!("expected {s} vertices, found {}", verts.len())));
        }
        if verts.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(parse_err(lineno, "parts must be strictly increasing"));
        }
        let e = g.index().index_of(&verts).expect("validated label-distinct edge");
        if g.contains(e) {
            return Err(parse_err(lineno, "duplicate edge"));
        }
        g.set(e, true);
    }
    Ok(g)
}

pub fn read_kpartite<R: BufRead>(mut reader: R) -> Result<KPartiteHypergraph> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_kpartite(&text)
}

pub fn write_kpartite<W: Write>(mut w: W, g: &KPartiteHypergraph) -> Result<()> {
    writeln!(w, "{} {} {} {}", g.s(), g.n(), g.k(), g.edge_count())?;
    for e in g.edge_indices() {
        let line: Vec<String> = g
            .index()
            .edge(e)
            .iter()
            .map(|&(l, v)| format!("{}:{}", l + 1, v + 1))
            .collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{blow_up_k_partite, sample_er};
    use crate::seed::rng_from_seed;

    #[test]
    fn plain_round_trip_is_bit_exact() {
        let g = sample_er(9, 0.4, 3, &mut rng_from_seed(4));
        let mut buf = Vec::new();
        write_hypergraph(&mut buf, &g).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let back = parse_hypergraph(&text).unwrap();
        assert_eq!(back, g);
        let mut again = Vec::new();
        write_hypergraph(&mut again, &back).unwrap();
        assert_eq!(again, text.as_bytes());
    }

    #[test]
    fn plain_format() {
        let g = parse_hypergraph("2 4 2\n1 2\n3 4\n").unwrap();
        assert_eq!(g.edge_list(), vec![vec![0, 1], vec![2, 3]]);
        let g = parse_hypergraph("2 3 0\n").unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn errors_name_the_line() {
        let cases = [
            ("2 4 2\n1 2\n3 x\n", 3),
            ("2 4 2\n1 2\n", 3),
            ("2 4 1\n2 1\n", 2),
            ("2 4 1\n1 5\n", 2),
            ("2 4\n", 1),
            ("2 4 2\n1 2\n1 2\n", 3),
            ("2 4 1\n1 2\n3 4\n", 3),
            ("2 4 1\n1 2 3\n", 2),
        ];
        for (text, line) in cases {
            match parse_hypergraph(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn kpartite_round_trip() {
        let g = sample_er(5, 0.5, 2, &mut rng_from_seed(8));
        let b = blow_up_k_partite(&g, 3).unwrap();
        let mut buf = Vec::new();
        write_kpartite(&mut buf, &b).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(&format!("2 5 3 {}\n", b.edge_count())));
        assert_eq!(parse_kpartite(&text).unwrap(), b);
        assert!(matches!(parse_kpartite("2 2 3 1\n1:1 1:2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_kpartite("2 2 3 1\n1:1 4:2\n"), Err(Error::Parse { line: 2, .. })));
    }
}
