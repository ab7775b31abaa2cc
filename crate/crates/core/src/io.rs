//! File formats: lattice cache, graph and analysis documents, DOT export.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::commgraph::{CommGraph, GraphAnalysis};
use crate::constructions::GroupSpec;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::lattice::{enumerate_subgroups, Lattice};
use crate::subgroup::{derived_series, structure_flags, StructureFlags, SubgroupSet};

pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedSubgroup {
    pub order: usize,
    pub members: Vec<u32>,
}

/// On-disk form of a complete lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeCacheFile {
    pub spec: GroupSpec,
    pub order: usize,
    pub element_labels: Vec<String>,
    pub subgroups: Vec<CachedSubgroup>,
    pub format_version: u32,
}

impl LatticeCacheFile {
    pub fn from_lattice(spec: &GroupSpec, lattice: &Lattice) -> LatticeCacheFile {
        let g = lattice.parent();
        LatticeCacheFile {
            spec: spec.clone(),
            order: g.order(),
            element_labels: g.labels().to_vec(),
            subgroups: lattice
                .subgroups()
                .iter()
                .map(|s| CachedSubgroup {
                    order: s.order(),
                    members: s.elements().collect(),
                })
                .collect(),
            format_version: CACHE_FORMAT_VERSION,
        }
    }

    pub fn parse(text: &str) -> Result<LatticeCacheFile> {
        serde_json::from_str(text).map_err(|e| Error::Syntax {
            message: e.to_string(),
            line: e.line(),
            column: e.column(),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("cache serializes");
        s.push('\n');
        s
    }

    /// Rebuilds the lattice over `table`, checking that every stored set is a
    /// subgroup and that the stored order is canonical.
    pub fn to_lattice(&self, table: &Arc<GroupTable>) -> Result<Lattice> {
        let bad = |m: String| Err(Error::InvalidCache(m));
        if self.format_version != CACHE_FORMAT_VERSION {
            return bad(format!("unsupported format_version {}", self.format_version));
        }
        if self.order != table.order() {
            return bad(format!("order {} does not match the group order {}", self.order, table.order()));
        }
        if self.element_labels != table.labels() {
            return bad("element labels do not match the constructed group".into());
        }
        let mut sets = Vec::with_capacity(self.subgroups.len());
        for (i, s) in self.subgroups.iter().enumerate() {
            if s.members.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("subgroup {i}: members not strictly ascending"));
            }
            if s.members.len() != s.order {
                return bad(format!("subgroup {i}: order {} but {} members", s.order, s.members.len()));
            }
            if let Some(&x) = s.members.iter().find(|&&x| x as usize >= self.order) {
                return bad(format!("subgroup {i}: element {x} out of range"));
            }
            let bits = Bits::from_ids(self.order, s.members.iter().copied());
            SubgroupSet::from_members(table, bits.clone())
                .map_err(|e| Error::InvalidCache(format!("subgroup {i}: {e}")))?;
            sets.push(bits);
        }
        let lattice = Lattice::from_subgroup_sets(table, sets.clone());
        let canonical = lattice.subgroups().iter().zip(&sets).all(|(s, b)| s.members() == b);
        let distinct = lattice.subgroups().windows(2).all(|w| w[0].members() != w[1].members());
        if !canonical || !distinct {
            return bad("subgroups not in strictly ascending canonical order".into());
        }
        if lattice.is_empty() || lattice.get(0).order() != 1 || lattice.get(lattice.len() - 1).order() != self.order {
            return bad("lattice must run from the trivial subgroup to the whole group".into());
        }
        Ok(lattice)
    }
}

pub fn read_lattice_cache(path: &Path, spec: &GroupSpec, table: &Arc<GroupTable>) -> Result<Lattice> {
    let file = LatticeCacheFile::parse(&std::fs::read_to_string(path)?)?;
    if &file.spec != spec {
        return Err(Error::InvalidCache(format!("cache holds {} but {} was requested", file.spec, spec)));
    }
    file.to_lattice(table)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Loaded,
    Written,
}

/// Loads the lattice from `path` when it exists, otherwise enumerates and
/// writes it there.
pub fn load_or_enumerate(path: &Path, spec: &GroupSpec, table: &Arc<GroupTable>, cap: usize) -> Result<(Lattice, CacheStatus)> {
    if path.exists() {
        return Ok((read_lattice_cache(path, spec, table)?, CacheStatus::Loaded));
    }
    let lattice = enumerate_subgroups(table, cap)?;
    write_atomic(path, LatticeCacheFile::from_lattice(spec, &lattice).to_json().as_bytes())?;
    Ok((lattice, CacheStatus::Written))
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidInput, "path has no file name")))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::Io(e)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupInfo {
    pub spec: GroupSpec,
    pub order: usize,
    pub factorization: Vec<(u64, u32)>,
    pub flags: StructureFlags,
    pub derived_orders: Vec<usize>,
}

impl GroupInfo {
    pub fn new(spec: &GroupSpec, table: &Arc<GroupTable>) -> GroupInfo {
        GroupInfo {
            spec: spec.clone(),
            order: table.order(),
            factorization: table.order_factorization().to_vec(),
            flags: structure_flags(table),
            derived_orders: derived_series(table).orders(),
        }
    }

    /// `2^3 * 3`, or `1` for the trivial group.
    pub fn factorization_text(&self) -> String {
        if self.factorization.is_empty() {
            return "1".into();
        }
        self.factorization
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect::<Vec<_>>()
            .join(" * ")
    }

    pub fn to_text(&self) -> String {
        let f = &self.flags;
        format!(
            "group: {}\norder: {} = {}\nabelian: {}\nnilpotent: {}\nmetabelian: {}\nsolvable: {}\nderived series orders: {:?}\n",
            self.spec,
            self.order,
            self.factorization_text(),
            f.is_abelian,
            f.is_nilpotent,
            f.is_metabelian,
            f.is_solvable,
            self.derived_orders
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDoc {
    pub vertices: Vec<usize>,
    pub diameter: usize,
    pub class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisDoc {
    pub spec: GroupSpec,
    pub p: u64,
    pub kind: String,
    pub components: Vec<ComponentDoc>,
    pub connected_diameter: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: usize,
    pub order: usize,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub spec: GroupSpec,
    pub p: u64,
    pub kind: String,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<[u64; 4]>,
    pub components: Vec<ComponentDoc>,
    pub connected_diameter: usize,
}

fn component_docs(analysis: &GraphAnalysis) -> Vec<ComponentDoc> {
    analysis
        .components
        .iter()
        .map(|c| ComponentDoc {
            vertices: c.vertices.clone(),
            diameter: c.diameter,
            class: c.class.name().to_string(),
            center: c.class.center(),
        })
        .collect()
}

fn witness_labels(s: &SubgroupSet) -> Vec<String> {
    s.witnesses().iter().map(|&w| s.parent().label(w).to_string()).collect()
}

impl AnalysisDoc {
    pub fn new(spec: &GroupSpec, graph: &CommGraph, analysis: &GraphAnalysis) -> AnalysisDoc {
        AnalysisDoc {
            spec: spec.clone(),
            p: graph.p(),
            kind: graph.kind().to_string(),
            components: component_docs(analysis),
            connected_diameter: analysis.connected_diameter,
        }
    }
}

impl GraphDoc {
    pub fn new(spec: &GroupSpec, graph: &CommGraph, analysis: &GraphAnalysis) -> GraphDoc {
        GraphDoc {
            spec: spec.clone(),
            p: graph.p(),
            kind: graph.kind().to_string(),
            vertices: graph
                .lattice()
                .subgroups()
                .iter()
                .enumerate()
                .map(|(id, s)| VertexDoc {
                    id,
                    order: s.order(),
                    witnesses: witness_labels(s),
                })
                .collect(),
            edges: graph
                .edges()
                .iter()
                .map(|e| [e.i as u64, e.j as u64, e.a as u64, e.b as u64])
                .collect(),
            components: component_docs(analysis),
            connected_diameter: analysis.connected_diameter,
        }
    }
}

pub fn to_json_text<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
    s.push('\n');
    s
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT text with one line per vertex and one per edge, ascending.
pub fn export_dot(graph: &CommGraph) -> String {
    let mut out = String::from("graph G {\n");
    for (i, s) in graph.lattice().subgroups().iter().enumerate() {
        let label = format!("|H|={}: {}", s.order(), witness_labels(s).join(", "));
        writeln!(out, "\"S{i}\" [label=\"{}\"];", dot_escape(&label)).unwrap();
    }
    let mut edges: Vec<(usize, usize)> = graph.edges().iter().map(|e| (e.i.min(e.j), e.i.max(e.j))).collect();
    edges.sort_unstable();
    for (i, j) in edges {
        writeln!(out, "\"S{i}\" -- \"S{j}\";").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Vertices (id, label) and edges parsed back from [`export_dot`] output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DotGraph {
    pub vertices: Vec<(String, String)>,
    pub edges: Vec<(String, String)>,
}

/// A small parser for the undirected subset of the DOT language produced
/// here: quoted ids, one `label` attribute, `--` edges, `;` terminators.
pub fn parse_dot(text: &str) -> Result<DotGraph> {
    let mut p = DotParser { s: text.as_bytes(), pos: 0 };
    p.ws();
    p.keyword("graph")?;
    p.ws();
    if p.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
        p.ident()?;
    } else if p.peek() == Some(b'"') {
        p.quoted()?;
    }
    p.ws();
    p.expect(b'{')?;
    let mut g = DotGraph {
        vertices: Vec::new(),
        edges: Vec::new(),
    };
    loop {
        p.ws();
        if p.peek() == Some(b'}') {
            p.pos += 1;
            break;
        }
        let a = p.quoted()?;
        p.ws();
        if p.s[p.pos..].starts_with(b"--") {
            p.pos += 2;
            p.ws();
            let b = p.quoted()?;
            if !g.vertices.iter().any(|(v, _)| v == &a) || !g.vertices.iter().any(|(v, _)| v == &b) {
                return Err(p.error("edge references an undeclared vertex"));
            }
            g.edges.push((a, b));
        } else {
            p.expect(b'[')?;
            p.ws();
            p.keyword("label")?;
            p.ws();
            p.expect(b'=')?;
            p.ws();
            let label = p.quoted()?;
            p.ws();
            p.expect(b']')?;
            g.vertices.push((a, label));
        }
        p.ws();
        p.expect(b';')?;
    }
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.error("trailing input after graph body"));
    }
    Ok(g)
}

struct DotParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl DotParser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn error(&self, message: &str) -> Error {
        let before = &self.s[..self.pos];
        let line = before.iter().filter(|&&c| c == b'\n').count() + 1;
        let column = self.pos - before.iter().rposition(|&c| c == b'\n').map_or(0, |i| i + 1) + 1;
        Error::Syntax {
            message: message.to_string(),
            line,
            column,
        }
    }

    fn ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn keyword(&mut self, word: &str) -> Result<()> {
        if self.s[self.pos..].starts_with(word.as_bytes()) {
            self.pos += word.len();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{word}`")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected identifier"));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn quoted(&mut self) -> Result<String> {
        self.expect(b'"')?;
        let mut out = Vec::new();
        loop {
            match self.peek() {
                None => return Err(self.error("unterminated string")),
                Some(b'"') => {
                    self.pos += 1;
                    break;
                }
                Some(b'\\') => {
                    let c = self.s.get(self.pos + 1).copied().ok_or_else(|| self.error("dangling escape"))?;
                    out.push(c);
                    self.pos += 2;
                }
                Some(c) => {
                    out.push(c);
                    self.pos += 1;
                }
            }
        }
        String::from_utf8(out).map_err(|_| self.error("invalid UTF-8 in string"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commgraph::GraphKind;
    use crate::constructions::construct;
    use crate::group::DEFAULT_ORDER_CAP;
    use crate::lattice::DEFAULT_LATTICE_CAP;

    fn graph(spec: &GroupSpec, p: u64, kind: GraphKind) -> CommGraph {
        let g = Arc::new(construct(spec, DEFAULT_ORDER_CAP).unwrap());
        let l = Arc::new(enumerate_subgroups(&g, DEFAULT_LATTICE_CAP).unwrap());
        CommGraph::build(&l, p, kind).unwrap()
    }

    #[test]
    fn dot_for_cyclic_six() {
        let dot = export_dot(&graph(&GroupSpec::Cyclic(6), 2, GraphKind::Commensurability));
        let lines: Vec<&str> = dot.lines().collect();
        assert_eq!(lines.len(), 1 + 4 + 2 + 1);
        assert_eq!(lines[0], "graph G {");
        assert_eq!(lines[1], "\"S0\" [label=\"|H|=1: \"];");
        assert_eq!(lines[5], "\"S0\" -- \"S1\";");
        assert_eq!(lines[6], "\"S2\" -- \"S3\";");
        assert!(dot.ends_with("}\n"));
        let parsed = parse_dot(&dot).unwrap();
        assert_eq!(parsed.vertices.len(), 4);
        assert_eq!(parsed.edges, vec![("S0".into(), "S1".into()), ("S2".into(), "S3".into())]);
    }

    #[test]
    fn dot_for_trivial_group_has_three_lines() {
        let dot = export_dot(&graph(&GroupSpec::Cyclic(1), 2, GraphKind::Commensurability));
        assert_eq!(dot, "graph G {\n\"S0\" [label=\"|H|=1: \"];\n}\n");
    }

    #[test]
    fn dot_for_sym4_containment() {
        let dot = export_dot(&graph(&GroupSpec::Sym(4), 3, GraphKind::Containment));
        let parsed = parse_dot(&dot).unwrap();
        assert_eq!(parsed.vertices.len(), 30);
    }

    #[test]
    fn dot_parser_rejects_malformed_input() {
        assert!(parse_dot("graph G { \"S0\" -- \"S1\"; }").is_err());
        assert!(parse_dot("graph G { \"S0\" [label=\"x\"] }").is_err());
        assert!(parse_dot("digraph G { }").is_err());
        assert!(parse_dot("graph G { } x").is_err());
        assert!(parse_dot("graph G { \"S0\" [label=\"a\\\"b\"]; }").is_ok());
    }

    #[test]
    fn cache_round_trip() {
        let spec = GroupSpec::Sym(4);
        let g = Arc::new(construct(&spec, DEFAULT_ORDER_CAP).unwrap());
        let l = enumerate_subgroups(&g, DEFAULT_LATTICE_CAP).unwrap();
        let file = LatticeCacheFile::from_lattice(&spec, &l);
        let text = file.to_json();
        let back = LatticeCacheFile::parse(&text).unwrap();
        assert_eq!(back, file);
        let l2 = back.to_lattice(&g).unwrap();
        assert_eq!(l2.len(), 30);
        for (a, b) in l.subgroups().iter().zip(l2.subgroups()) {
            assert_eq!(a, b);
            assert_eq!(a.witnesses(), b.witnesses());
        }
    }

    #[test]
    fn cache_rejects_tampering() {
        let spec = GroupSpec::Cyclic(6);
        let g = Arc::new(construct(&spec, DEFAULT_ORDER_CAP).unwrap());
        let l = enumerate_subgroups(&g, DEFAULT_LATTICE_CAP).unwrap();
        let good = LatticeCacheFile::from_lattice(&spec, &l);

        let mut swapped = good.clone();
        swapped.subgroups.swap(1, 2);
        assert!(matches!(swapped.to_lattice(&g), Err(Error::InvalidCache(_))));

        let mut not_closed = good.clone();
        not_closed.subgroups[1] = CachedSubgroup { order: 2, members: vec![0, 1] };
        assert!(matches!(not_closed.to_lattice(&g), Err(Error::InvalidCache(_))));

        let mut version = good.clone();
        version.format_version = 2;
        assert!(matches!(version.to_lattice(&g), Err(Error::InvalidCache(_))));

        let mut unsorted = good;
        unsorted.subgroups[3].members.reverse();
        assert!(matches!(unsorted.to_lattice(&g), Err(Error::InvalidCache(_))));
    }

    #[test]
    fn graph_doc_shape() {
        let spec = GroupSpec::Cyclic(6);
        let g = graph(&spec, 2, GraphKind::Commensurability);
        let doc = GraphDoc::new(&spec, &g, &g.analyze());
        let v: serde_json::Value = serde_json::from_str(&to_json_text(&doc)).unwrap();
        assert_eq!(v["spec"], serde_json::json!({"cyclic": 6}));
        assert_eq!(v["kind"], "comm");
        assert_eq!(v["edges"], serde_json::json!([[0, 1, 0, 1], [2, 3, 0, 1]]));
        assert_eq!(v["connected_diameter"], 1);
        assert!(v["components"][0].get("center").is_none());
    }

    #[test]
    fn group_info_text() {
        let spec = GroupSpec::Sym(4);
        let g = Arc::new(construct(&spec, DEFAULT_ORDER_CAP).unwrap());
        let info = GroupInfo::new(&spec, &g);
        assert_eq!(info.factorization_text(), "2^3 * 3");
        assert_eq!(info.derived_orders, vec![24, 12, 4, 1]);
        assert!(info.to_text().contains("metabelian: false"));
    }
}
