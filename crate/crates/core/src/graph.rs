//! GKM moment graphs: fixed points as vertices, one-dimensional orbits as
//! weight-labelled edges.
//!
//! Edges are stored downward (`length(source) > length(target)`); the edges
//! below a vertex are the weights of its cell.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::coxeter::{CartanMatrix, CosetSystem, Parabolic};
use crate::error::GraphError;
use crate::lattice::{check_coprime_h, check_coprime_k, CoprimalityReport, Weight};
use crate::linalg::{RationalSystem, Solution};
use crate::poly::{linear_from_weight, rat, Rational};

/// Which equivariant theory a computation lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theory {
    H,
    K,
}

impl std::str::FromStr for Theory {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "H" | "h" => Ok(Theory::H),
            "K" | "k" => Ok(Theory::K),
            _ => Err(format!("unknown theory {s:?}; expected H or K")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub length: usize,
    pub position: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmGraph {
    rank: usize,
    variables: Vec<String>,
    truncation: Option<usize>,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    down: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    rank: usize,
    #[serde(default)]
    variables: Vec<String>,
    truncation: Option<usize>,
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: String,
    length: usize,
    #[serde(default)]
    position: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    source: String,
    target: String,
    weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssumptionCheck {
    pub assumption: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphValidationReport {
    pub theory: Theory,
    pub passed: bool,
    pub checks: Vec<AssumptionCheck>,
    /// Per-vertex coprimality of the downward star under the requested theory.
    pub stars: Vec<(String, CoprimalityReport)>,
}

/// Output formats of [`GkmGraph::export`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Dot,
    Svg,
    Table,
}

impl std::str::FromStr for ExportFormat {
    type Err = GraphError;
    fn from_str(s: &str) -> Result<Self, GraphError> {
        match s {
            "json" => Ok(ExportFormat::Json),
            "dot" => Ok(ExportFormat::Dot),
            "svg" => Ok(ExportFormat::Svg),
            "table" => Ok(ExportFormat::Table),
            _ => Err(GraphError::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ExportOptions<'a> {
    /// Swap the horizontal and vertical drawing axes.
    pub rotate_basis: bool,
    /// Optional per-vertex decoration (e.g. a class rendered as factored strings).
    pub overlay: Option<&'a [String]>,
}

impl GkmGraph {
    /// Assembles a graph and enforces its structural invariants.
    pub fn from_parts(
        rank: usize,
        variables: Vec<String>,
        truncation: Option<usize>,
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
    ) -> Result<Self, GraphError> {
        if rank == 0 {
            return Err(GraphError::Schema("rank must be at least 1".into()));
        }
        let variables = if variables.is_empty() { crate::poly::default_names(rank) } else { variables };
        if variables.len() != rank {
            return Err(GraphError::Schema(format!("{} variable names for rank {rank}", variables.len())));
        }
        let mut ids = BTreeSet::new();
        for v in &vertices {
            if !ids.insert(v.id.as_str()) {
                return Err(GraphError::Schema(format!("duplicate vertex id {:?}", v.id)));
            }
        }
        let mut down = vec![Vec::new(); vertices.len()];
        let mut pairs = BTreeSet::new();
        for (k, e) in edges.iter().enumerate() {
            let (Some(src), Some(tgt)) = (vertices.get(e.source), vertices.get(e.target)) else {
                return Err(GraphError::Schema(format!("edge {k} references a missing vertex")));
            };
            if e.weight.rank() != rank {
                return Err(GraphError::Schema(format!("edge {k} weight has rank {}", e.weight.rank())));
            }
            if e.weight.is_zero() {
                return Err(GraphError::Schema(format!("edge {}->{} has zero weight", src.id, tgt.id)));
            }
            if e.source == e.target {
                return Err(GraphError::Schema(format!("self-loop at {}", src.id)));
            }
            if src.length <= tgt.length {
                return Err(GraphError::Schema(format!("edge {}->{} is not downward", src.id, tgt.id)));
            }
            if !pairs.insert((e.source.min(e.target), e.source.max(e.target))) {
                return Err(GraphError::Schema(format!("duplicate edge {}->{}", src.id, tgt.id)));
            }
            down[e.source].push(k);
        }
        for (v, d) in vertices.iter().zip(&down) {
            if d.len() != v.length {
                return Err(GraphError::EdgeCount { vertex: v.id.clone(), length: v.length, edges: d.len() });
            }
        }
        Ok(GkmGraph { rank, variables, truncation, vertices, edges, down })
    }

    /// The moment graph of `G/P`: minimal coset representatives of length
    /// ≤ `max_length` with their inversion roots as downward edges.
    pub fn from_cartan(
        cartan: &CartanMatrix,
        parabolic: &Parabolic,
        max_length: Option<usize>,
    ) -> Result<Self, GraphError> {
        let sys = CosetSystem::enumerate(cartan, parabolic, max_length)?;
        let n = cartan.rank();
        let base = basepoint_root_coords(cartan, parabolic);
        let vertices = sys
            .reps
            .iter()
            .map(|rep| Vertex {
                id: rep.name(),
                length: rep.length,
                position: rep.shift.iter().zip(&base).map(|(&s, b)| b - rat(s)).collect(),
            })
            .collect();
        let mut edges = Vec::new();
        for idx in 0..sys.reps.len() {
            for d in sys.inversions(idx)? {
                edges.push(Edge { source: idx, target: d.target, weight: d.root });
            }
        }
        let truncation = sys.truncation.or(max_length.filter(|_| !cartan.is_finite_type()));
        Self::from_parts(n, Vec::new(), truncation, vertices, edges)
    }

    /// Parses the graph JSON exchange format.
    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let raw: GraphJson = serde_json::from_str(text)?;
        let index: HashMap<&str, usize> = raw.vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
        let lookup = |id: &str| {
            index.get(id).copied().ok_or_else(|| GraphError::Schema(format!("edge references unknown vertex {id:?}")))
        };
        let edges = raw
            .edges
            .iter()
            .map(|e| Ok(Edge { source: lookup(&e.source)?, target: lookup(&e.target)?, weight: e.weight.clone() }))
            .collect::<Result<Vec<_>, GraphError>>()?;
        let vertices = raw
            .vertices
            .iter()
            .map(|v| {
                let position = v
                    .position
                    .iter()
                    .map(|p| p.parse::<Rational>().map_err(|_| GraphError::Schema(format!("bad position {p:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Vertex { id: v.id.clone(), length: v.length, position })
            })
            .collect::<Result<Vec<_>, GraphError>>()?;
        Self::from_parts(raw.rank, raw.variables, raw.truncation, vertices, edges)
    }

    pub fn to_json(&self) -> String {
        let raw = GraphJson {
            rank: self.rank,
            variables: self.variables.clone(),
            truncation: self.truncation,
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexJson {
                    id: v.id.clone(),
                    length: v.length,
                    position: v.position.iter().map(Rational::to_string).collect(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    source: self.vertices[e.source].id.clone(),
                    target: self.vertices[e.target].id.clone(),
                    weight: e.weight.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("graph serializes") + "\n"
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn length(&self, v: usize) -> usize {
        self.vertices[v].length
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn down_edges(&self, v: usize) -> impl Iterator<Item = &Edge> {
        self.down[v].iter().map(move |&k| &self.edges[k])
    }

    /// Vertex indices sorted by length, stable in storage order.
    pub fn by_length(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by_key(|&v| self.vertices[v].length);
        order
    }

    pub fn max_length(&self) -> usize {
        self.vertices.iter().map(|v| v.length).max().unwrap_or(0)
    }

    /// `u ≤ v` in the order generated by downward edges.
    pub fn below(&self, v: usize) -> Vec<bool> {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([v]);
        seen[v] = true;
        while let Some(x) = queue.pop_front() {
            for e in self.down_edges(x) {
                if !seen[e.target] {
                    seen[e.target] = true;
                    queue.push_back(e.target);
                }
            }
        }
        seen
    }

    pub fn with_variables(mut self, names: Vec<String>) -> Result<Self, GraphError> {
        if names.len() != self.rank {
            return Err(GraphError::Schema(format!("{} variable names for rank {}", names.len(), self.rank)));
        }
        self.variables = names;
        Ok(self)
    }

    pub fn with_ids(mut self, ids: Vec<String>) -> Result<Self, GraphError> {
        if ids.len() != self.vertices.len() || ids.iter().collect::<BTreeSet<_>>().len() != ids.len() {
            return Err(GraphError::Schema("vertex ids must be distinct, one per vertex".into()));
        }
        for (v, id) in self.vertices.iter_mut().zip(ids) {
            v.id = id;
        }
        Ok(self)
    }

    /// Applies a lattice automorphism `M` (new coordinates = `M · old`) to
    /// every weight and position.
    pub fn change_basis(&self, matrix: &[Vec<i64>]) -> Self {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight = e.weight.transform(matrix);
        }
        for v in &mut g.vertices {
            if v.position.len() == self.rank {
                v.position =
                    matrix.iter().map(|row| row.iter().zip(&v.position).map(|(&m, p)| rat(m) * p).sum()).collect();
            }
        }
        g
    }

    /// The length ideal `{length ≤ max}`; closed under downward edges.
    pub fn restrict_to_length(&self, max: usize) -> Self {
        let keep: Vec<usize> = (0..self.vertices.len()).filter(|&v| self.vertices[v].length <= max).collect();
        let remap: HashMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let vertices = keep.iter().map(|&v| self.vertices[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| remap.contains_key(&e.source))
            .map(|e| Edge { source: remap[&e.source], target: remap[&e.target], weight: e.weight.clone() })
            .collect();
        let truncation = if max < self.max_length() { Some(max) } else { self.truncation };
        Self::from_parts(self.rank, self.variables.clone(), truncation, vertices, edges)
            .expect("length ideals inherit the graph invariants")
    }

    /// Machine check of the stratification hypotheses for isolated fixed points.
    pub fn validate(&self, theory: Theory) -> GraphValidationReport {
        let mut checks = Vec::new();

        // cells attach to strictly lower strata and every lower interval reaches a base point
        let mut witness = None;
        for v in 0..self.vertices.len() {
            if self.down_edges(v).any(|e| self.length(e.target) >= self.length(v)) {
                witness = Some(format!("vertex {} has a non-downward edge", self.vertices[v].id));
                break;
            }
            if !self.below(v).iter().enumerate().any(|(u, &b)| b && self.length(u) == 0) {
                witness = Some(format!("vertex {} does not reach a length-0 vertex", self.vertices[v].id));
                break;
            }
        }
        checks.push(AssumptionCheck { assumption: "stratification", passed: witness.is_none(), witness });

        // the cell splits into one line per downward edge
        let witness = (0..self.vertices.len()).find(|&v| self.down[v].len() != self.length(v)).map(|v| {
            format!(
                "vertex {} has length {} but {} downward edges",
                self.vertices[v].id,
                self.length(v),
                self.down[v].len()
            )
        });
        checks.push(AssumptionCheck { assumption: "direct-sum", passed: witness.is_none(), witness });

        // each line closes up onto another fixed point
        let mut pairs = BTreeSet::new();
        let witness = self.edges.iter().find_map(|e| {
            if e.source == e.target || e.weight.is_zero() || e.target >= self.vertices.len() {
                Some(format!("malformed edge at {}", self.vertices[e.source].id))
            } else if !pairs.insert((e.source.min(e.target), e.source.max(e.target))) {
                Some(format!("repeated edge {}-{}", self.vertices[e.source].id, self.vertices[e.target].id))
            } else {
                None
            }
        });
        checks.push(AssumptionCheck { assumption: "attaching-maps", passed: witness.is_none(), witness });

        let mut stars = Vec::new();
        let mut witness = None;
        for (v, vert) in self.vertices.iter().enumerate() {
            let ws: Vec<Weight> = self.down_edges(v).map(|e| e.weight.clone()).collect();
            let report = match theory {
                Theory::H => check_coprime_h(&ws),
                Theory::K => check_coprime_k(&ws),
            };
            if !report.ok && witness.is_none() {
                let detail = serde_json::to_string(&report.violations).unwrap_or_default();
                witness = Some(format!("vertex {}: {detail}", vert.id));
            }
            stars.push((vert.id.clone(), report));
        }
        checks.push(AssumptionCheck { assumption: "euler-coprime", passed: witness.is_none(), witness });

        GraphValidationReport { theory, passed: checks.iter().all(|c| c.passed), checks, stars }
    }

    pub fn render_weight(&self, w: &Weight) -> String {
        linear_from_weight(w).map(|l| l.render(&self.variables)).unwrap_or_else(|_| "0".into())
    }

    pub fn export(&self, format: ExportFormat, opts: &ExportOptions<'_>) -> String {
        match format {
            ExportFormat::Json => self.to_json(),
            ExportFormat::Dot => self.to_dot(opts),
            ExportFormat::Svg => self.to_svg(opts),
            ExportFormat::Table => self.to_table(opts),
        }
    }

    fn to_table(&self, opts: &ExportOptions<'_>) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "# vertices: {}  edges: {}  truncation: {}",
            self.vertices.len(),
            self.edges.len(),
            self.truncation.map_or("complete".to_string(), |l| l.to_string())
        )
        .unwrap();
        for (v, vert) in self.vertices.iter().enumerate() {
            let pos: Vec<String> = vert.position.iter().map(Rational::to_string).collect();
            let down: Vec<String> = self
                .down_edges(v)
                .map(|e| format!("{}[{}]", self.vertices[e.target].id, self.render_weight(&e.weight)))
                .collect();
            write!(out, "{}\tlength={}\tposition=({})\tdown: {}", vert.id, vert.length, pos.join(","), down.join(" "))
                .unwrap();
            if let Some(labels) = opts.overlay {
                write!(out, "\tvalue: {}", labels[v]).unwrap();
            }
            out.push('\n');
        }
        out
    }

    fn to_dot(&self, opts: &ExportOptions<'_>) -> String {
        let plane = self.drawing_plane(opts.rotate_basis);
        let mut out = String::from("graph gkm {\n  node [shape=circle, fontsize=10];\n  edge [fontsize=9];\n");
        for (v, vert) in self.vertices.iter().enumerate() {
            let mut label = vert.id.clone();
            if let Some(labels) = opts.overlay {
                label = format!("{label}\\n{}", labels[v]);
            }
            let (x, y) = &plane[v];
            writeln!(out, "  \"{}\" [label=\"{}\", pos=\"{},{}!\"];", vert.id, label, x, y).unwrap();
        }
        for e in &self.edges {
            writeln!(
                out,
                "  \"{}\" -- \"{}\" [label=\"{}\"];",
                self.vertices[e.source].id,
                self.vertices[e.target].id,
                self.render_weight(&e.weight)
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }

    fn to_svg(&self, opts: &ExportOptions<'_>) -> String {
        let plane = self.drawing_plane(opts.rotate_basis);
        let pixels = to_pixels(&plane, 480, 60);
        let (w, h) = pixels.iter().fold((0i64, 0i64), |(w, h), (x, y)| (w.max(*x), h.max(*y)));
        let mut out = String::new();
        writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"monospace\" font-size=\"11\">",
            w + 60,
            h + 60
        )
        .unwrap();
        for e in &self.edges {
            let (x1, y1) = pixels[e.source];
            let (x2, y2) = pixels[e.target];
            writeln!(out, "  <line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"#888\"/>").unwrap();
            writeln!(
                out,
                "  <text x=\"{}\" y=\"{}\" fill=\"#36c\">{}</text>",
                (x1 + x2) / 2,
                (y1 + y2) / 2,
                xml_escape(&self.render_weight(&e.weight))
            )
            .unwrap();
        }
        for (v, vert) in self.vertices.iter().enumerate() {
            let (x, y) = pixels[v];
            writeln!(out, "  <circle cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"black\"/>").unwrap();
            writeln!(out, "  <text x=\"{}\" y=\"{}\">{}</text>", x + 6, y - 6, xml_escape(&vert.id)).unwrap();
            if let Some(labels) = opts.overlay {
                writeln!(
                    out,
                    "  <text x=\"{}\" y=\"{}\" fill=\"#a33\">{}</text>",
                    x + 6,
                    y + 14,
                    xml_escape(&labels[v])
                )
                .unwrap();
            }
        }
        out.push_str("</svg>\n");
        out
    }

    /// Two rational drawing coordinates per vertex. A one-dimensional orbit
    /// (affine rank two) is drawn as a ladder: position along the orbit line
    /// horizontally, length vertically.
    pub fn drawing_plane(&self, rotate: bool) -> Vec<(Rational, Rational)> {
        let dims = self.vertices.iter().map(|v| v.position.len()).min().unwrap_or(0);
        let mut plane: Vec<(Rational, Rational)> = if dims == 0 {
            self.vertices.iter().enumerate().map(|(i, v)| (rat(i as i64), rat(v.length as i64))).collect()
        } else if let Some(param) = self.collinear_parameter() {
            param.into_iter().zip(&self.vertices).map(|(t, v)| (t, rat(v.length as i64))).collect()
        } else {
            self.vertices
                .iter()
                .map(|v| (v.position[0].clone(), v.position.get(1).cloned().unwrap_or_else(Rational::zero)))
                .collect()
        };
        if rotate {
            for p in &mut plane {
                std::mem::swap(&mut p.0, &mut p.1);
            }
        }
        plane
    }

    /// If all positions lie on one line, the coordinate of each along it.
    fn collinear_parameter(&self) -> Option<Vec<Rational>> {
        let p0 = &self.vertices.first()?.position;
        let dir: Vec<Rational> = self
            .vertices
            .iter()
            .map(|v| v.position.iter().zip(p0).map(|(a, b)| a - b).collect::<Vec<_>>())
            .find(|d: &Vec<Rational>| d.iter().any(|x| !x.is_zero()))?;
        let k = dir.iter().position(|x| !x.is_zero())?;
        let mut out = Vec::new();
        for v in &self.vertices {
            let d: Vec<Rational> = v.position.iter().zip(p0).map(|(a, b)| a - b).collect();
            let t = &d[k] / &dir[k];
            if d.iter().zip(&dir).any(|(x, y)| *x != &t * y) {
                return None;
            }
            out.push(t);
        }
        Some(out)
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Exact integer pixel coordinates: clear denominators, then scale the larger
/// extent to roughly `extent` pixels, flipping the vertical axis.
fn to_pixels(plane: &[(Rational, Rational)], extent: i64, margin: i64) -> Vec<(i64, i64)> {
    let den = plane.iter().fold(BigInt::one(), |l, (x, y)| l.lcm(x.denom()).lcm(y.denom()));
    let ints: Vec<(BigInt, BigInt)> = plane
        .iter()
        .map(|(x, y)| {
            (
                (x * Rational::from_integer(den.clone())).to_integer(),
                (y * Rational::from_integer(den.clone())).to_integer(),
            )
        })
        .collect();
    let min_x = ints.iter().map(|p| p.0.clone()).min().unwrap_or_default();
    let max_x = ints.iter().map(|p| p.0.clone()).max().unwrap_or_default();
    let min_y = ints.iter().map(|p| p.1.clone()).min().unwrap_or_default();
    let max_y = ints.iter().map(|p| p.1.clone()).max().unwrap_or_default();
    let span = (&max_x - &min_x).max(&max_y - &min_y).max(BigInt::one());
    let scale = (BigInt::from(extent) / &span).max(BigInt::one());
    ints.iter()
        .map(|(x, y)| {
            let px = (x - &min_x) * &scale + margin;
            let py = (&max_y - y) * &scale + margin;
            (px.to_i64().unwrap_or(i64::MAX), py.abs().to_i64().unwrap_or(i64::MAX))
        })
        .collect()
}

/// Root coordinates of the basepoint `λ` (zero for a singular Cartan matrix,
/// where positions are reported relative to `λ`).
fn basepoint_root_coords(cartan: &CartanMatrix, parabolic: &Parabolic) -> Vec<Rational> {
    let n = cartan.rank();
    let matrix = cartan.rows().iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
    let rhs = (0..n).map(|i| rat(i64::from(!parabolic.contains(i)))).collect();
    match RationalSystem::new(matrix, rhs, n).map(|s| s.solve()) {
        Ok(Solution::Unique(c)) => c,
        _ => vec![Rational::zero(); n],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g2() -> GkmGraph {
        GkmGraph::from_cartan(&CartanMatrix::parse("2,-1;-3,2").unwrap(), &Parabolic::new([0]), None).unwrap()
    }

    fn affine(l: usize) -> GkmGraph {
        GkmGraph::from_cartan(&CartanMatrix::parse("2,-2;-2,2").unwrap(), &Parabolic::new([1]), Some(l)).unwrap()
    }

    fn complete(g: &GkmGraph) -> bool {
        let n = g.num_vertices();
        let pairs: BTreeSet<(usize, usize)> =
            g.edges().iter().map(|e| (e.source.min(e.target), e.source.max(e.target))).collect();
        pairs.len() == n * (n - 1) / 2
    }

    #[test]
    fn g2_is_complete_on_six() {
        let g = g2();
        assert_eq!(g.num_vertices(), 6);
        assert_eq!(g.edges().len(), 15);
        assert!(complete(&g));
        assert_eq!(g.truncation(), None);
        assert!(g.validate(Theory::H).passed);
        assert!(g.validate(Theory::K).passed);
    }

    #[test]
    fn affine_a1_is_complete_chain() {
        let g = affine(6);
        assert_eq!(g.num_vertices(), 7);
        assert!(complete(&g));
        for (k, v) in g.vertices().iter().enumerate() {
            assert_eq!(v.length, k);
        }
        assert_eq!(g.truncation(), Some(6));
        // oracle: every pair of orbit points is related by some affine reflection,
        // i.e. the position difference is a multiple of a real root
        let roots = crate::coxeter::real_roots(&CartanMatrix::parse("2,-2;-2,2").unwrap(), 40);
        for e in g.edges() {
            let d: Vec<Rational> =
                g.vertex(e.source).position.iter().zip(&g.vertex(e.target).position).map(|(a, b)| a - b).collect();
            assert!(roots.iter().any(|r| {
                let k = r.leading_index().unwrap();
                let t = &d[k] / Rational::from_integer(r.coords()[k].clone());
                d.iter().zip(r.coords()).all(|(x, c)| *x == &t * Rational::from_integer(c.clone()))
            }));
        }
        assert!(g.validate(Theory::K).passed);
        assert!(g.validate(Theory::H).passed);
    }

    #[test]
    fn a2_borel() {
        let g = GkmGraph::from_cartan(&CartanMatrix::parse("2,-1;-1,2").unwrap(), &Parabolic::default(), None).unwrap();
        assert_eq!(g.num_vertices(), 6);
        assert_eq!(g.edges().len(), 9);
        assert!(g.validate(Theory::H).passed);
    }

    #[test]
    fn edge_weights_point_along_position_differences() {
        for g in [g2(), affine(6)] {
            for e in g.edges() {
                let d: Vec<Rational> =
                    g.vertex(e.source).position.iter().zip(&g.vertex(e.target).position).map(|(a, b)| a - b).collect();
                let k = e.weight.leading_index().unwrap();
                let t = &d[k] / Rational::from_integer(e.weight.coords()[k].clone());
                assert!(!t.is_zero());
                for (x, c) in d.iter().zip(e.weight.coords()) {
                    assert_eq!(*x, &t * Rational::from_integer(c.clone()));
                }
            }
        }
    }

    #[test]
    fn truncation_monotone() {
        for l in 1..7 {
            assert_eq!(affine(l).restrict_to_length(l - 1), affine(l - 1));
        }
    }

    #[test]
    fn explicit_graphs() {
        let p1 = r#"{"rank":1,"variables":["a"],"truncation":null,
            "vertices":[{"id":"0","length":0,"position":["0"]},{"id":"1","length":1,"position":["1"]}],
            "edges":[{"source":"1","target":"0","weight":[1]}]}"#;
        let g = GkmGraph::from_json(p1).unwrap();
        assert!(g.validate(Theory::H).passed);
        let point = r#"{"rank":2,"truncation":null,"vertices":[{"id":"p","length":0}],"edges":[]}"#;
        assert_eq!(GkmGraph::from_json(point).unwrap().num_vertices(), 1);
        let bad = r#"{"rank":1,"truncation":null,
            "vertices":[{"id":"0","length":0},{"id":"1","length":2}],
            "edges":[{"source":"1","target":"0","weight":[1]}]}"#;
        assert!(matches!(GkmGraph::from_json(bad), Err(GraphError::EdgeCount { .. })));
        let roundtrip = GkmGraph::from_json(&g2().to_json()).unwrap();
        assert_eq!(roundtrip, g2());
    }

    #[test]
    fn collinear_star_fails_validation() {
        let text = r#"{"rank":2,"truncation":null,
            "vertices":[{"id":"0","length":0},{"id":"1","length":1},{"id":"2","length":2}],
            "edges":[{"source":"1","target":"0","weight":[1,0]},
                     {"source":"2","target":"0","weight":[1,1]},
                     {"source":"2","target":"1","weight":[2,2]}]}"#;
        let g = GkmGraph::from_json(text).unwrap();
        let r = g.validate(Theory::K);
        assert!(!r.passed);
        let check = r.checks.iter().find(|c| c.assumption == "euler-coprime").unwrap();
        assert!(check.witness.as_ref().unwrap().contains("vertex 2"));
    }

    #[test]
    fn exports() {
        let g = g2();
        let dot = g.export(ExportFormat::Dot, &ExportOptions::default());
        assert_eq!(dot.matches(" -- ").count(), 15);
        assert_eq!(dot.matches("pos=").count(), 6);
        let point =
            GkmGraph::from_json(r#"{"rank":1,"truncation":null,"vertices":[{"id":"p","length":0}],"edges":[]}"#)
                .unwrap();
        let dot = point.export(ExportFormat::Dot, &ExportOptions::default());
        assert!(dot.starts_with("graph gkm {") && dot.contains("\"p\""));
        let labels: Vec<String> = (0..5).map(|i| format!("c{i}")).collect();
        let svg = affine(4).export(ExportFormat::Svg, &ExportOptions { rotate_basis: false, overlay: Some(&labels) });
        assert!(svg.contains("<svg") && svg.contains("c4"));
        assert!("bogus".parse::<ExportFormat>().is_err());
        assert_eq!(
            g.export(ExportFormat::Table, &ExportOptions::default()),
            g.export(ExportFormat::Table, &ExportOptions::default())
        );
    }
}
