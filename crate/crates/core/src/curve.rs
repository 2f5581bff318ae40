//! Reduced connected curves modelled by their decorated dual graph.
//!
//! A curve is a list of irreducible components, each carrying the Euler
//! characteristic of its structure sheaf, together with the points where
//! components are glued. Every gluing point has one of four local shapes;
//! the shape fixes how much the Euler characteristic drops when a given set
//! of branches through the point is glued.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest number of components accepted by a [`CurveGraph`].
pub const MAX_COMPONENTS: usize = 63;

/// Largest number of components for which subcurves are enumerated.
pub const MAX_ENUMERATED_COMPONENTS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown point kind `{0}`")]
    UnknownKind(String),
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("curve is disconnected")]
    Disconnected,
    #[error("point `{point}` of kind {kind} needs {expected} distinct incident components, got {got}")]
    Arity {
        point: String,
        kind: PointKind,
        expected: usize,
        got: usize,
    },
    #[error("component `{0}` has chi > 1")]
    ChiTooLarge(String),
    #[error("curve has no components")]
    Empty,
    #[error("curve has {0} components, more than supported")]
    TooManyComponents(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid preset: {0}")]
    InvalidPreset(String),
    #[error("split mode {mode:?} is not legal at a {kind} point")]
    IllegalMode { kind: PointKind, mode: SplitMode },
}

/// Local shape of a gluing point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointKind {
    /// Ordinary double point.
    Node,
    /// Two smooth branches with contact of order two.
    Tacnode,
    /// Three concurrent branches in a smooth surface.
    PlanarTriple,
    /// Three concurrent branches with independent tangents (not planar).
    SpatialTriple,
}

impl PointKind {
    pub fn arity(self) -> usize {
        match self {
            PointKind::Node | PointKind::Tacnode => 2,
            PointKind::PlanarTriple | PointKind::SpatialTriple => 3,
        }
    }

    /// Drop of chi when `branches` of the branches through the point are glued.
    pub fn delta(self, branches: usize) -> i64 {
        match (self, branches) {
            (_, 0) | (_, 1) => 0,
            (PointKind::Node, _) => 1,
            (PointKind::Tacnode, _) => 2,
            (PointKind::PlanarTriple, 2) | (PointKind::SpatialTriple, 2) => 1,
            (PointKind::PlanarTriple, _) => 3,
            (PointKind::SpatialTriple, _) => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PointKind::Node => "node",
            PointKind::Tacnode => "tacnode",
            PointKind::PlanarTriple => "planar-triple",
            PointKind::SpatialTriple => "spatial-triple",
        }
    }
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PointKind {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "node" => Ok(PointKind::Node),
            "tacnode" => Ok(PointKind::Tacnode),
            "planar-triple" => Ok(PointKind::PlanarTriple),
            "spatial-triple" => Ok(PointKind::SpatialTriple),
            other => Err(CurveError::UnknownKind(other.to_string())),
        }
    }
}

/// A set of component indices, stored as a bitmask.
///
/// Sets are ordered lexicographically by their ascending index lists, so
/// `{0} < {0,1} < {0,2} < {1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ComponentSet(u64);

impl ComponentSet {
    pub const EMPTY: ComponentSet = ComponentSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ComponentSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            ComponentSet(u64::MAX)
        } else {
            ComponentSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        ComponentSet(1u64 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        ComponentSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ComponentSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ComponentSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest index in the set.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Ascending indices.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Nonempty proper subsets of `self`, in increasing bitmask order.
    pub fn proper_subsets(self) -> impl Iterator<Item = ComponentSet> {
        let full = self.0;
        let mut sub = 0u64;
        std::iter::from_fn(move || {
            sub = sub.wrapping_sub(full) & full;
            (sub != 0 && sub != full).then_some(ComponentSet(sub))
        })
    }
}

impl FromIterator<usize> for ComponentSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = ComponentSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl Ord for ComponentSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for ComponentSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Component {
    pub id: String,
    /// Euler characteristic of the structure sheaf of the component.
    pub chi: i64,
    pub label: String,
}

impl Component {
    pub fn new(id: impl Into<String>, chi: i64) -> Self {
        let id = id.into();
        Component {
            label: id.clone(),
            id,
            chi,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GluingPoint {
    pub id: String,
    pub kind: PointKind,
    /// Indices of the components through the point, ascending.
    pub incident: Vec<usize>,
}

impl GluingPoint {
    pub fn incident_set(&self) -> ComponentSet {
        self.incident.iter().copied().collect()
    }

    /// Chi drop contributed by this point to a subcurve with members `set`.
    pub fn delta_on(&self, set: ComponentSet) -> i64 {
        self.kind.delta(self.incident_set().intersection(set).len())
    }
}

/// A subcurve together with its numerical invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subcurve {
    pub members: ComponentSet,
    pub chi: i64,
    /// Intersection number with the complementary subcurve.
    pub alpha: i64,
    pub connected: bool,
}

/// A reduced projective curve given by its decorated dual graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveGraph {
    components: Vec<Component>,
    points: Vec<GluingPoint>,
    chi_total: i64,
    genus: i64,
    connected: bool,
}

impl CurveGraph {
    /// Validates and assembles a curve. Disconnected curves are accepted here
    /// (they appear as transform targets); use [`CurveGraph::require_connected`]
    /// where connectivity matters.
    pub fn new(components: Vec<Component>, points: Vec<GluingPoint>) -> Result<Self, CurveError> {
        if components.is_empty() {
            return Err(CurveError::Empty);
        }
        if components.len() > MAX_COMPONENTS {
            return Err(CurveError::TooManyComponents(components.len()));
        }
        for (i, c) in components.iter().enumerate() {
            if components[..i].iter().any(|o| o.id == c.id) {
                return Err(CurveError::DuplicateId(c.id.clone()));
            }
            if c.chi > 1 {
                return Err(CurveError::ChiTooLarge(c.id.clone()));
            }
        }
        let mut points = points;
        for (i, p) in points.iter_mut().enumerate() {
            p.incident.sort_unstable();
            p.incident.dedup();
            if p.incident.iter().any(|&c| c >= components.len()) {
                return Err(CurveError::UnknownComponent(format!("#{}", p.incident[p.incident.len() - 1])));
            }
            if p.incident.len() != p.kind.arity() {
                return Err(CurveError::Arity {
                    point: p.id.clone(),
                    kind: p.kind,
                    expected: p.kind.arity(),
                    got: p.incident.len(),
                });
            }
            let _ = i;
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].iter().any(|o| o.id == p.id) {
                return Err(CurveError::DuplicateId(p.id.clone()));
            }
        }
        let mut curve = CurveGraph {
            components,
            points,
            chi_total: 0,
            genus: 0,
            connected: false,
        };
        let all = curve.all();
        curve.chi_total = curve.chi_of(all);
        curve.genus = 1 - curve.chi_total;
        curve.connected = curve.is_connected_set(all);
        Ok(curve)
    }

    pub fn require_connected(&self) -> Result<(), CurveError> {
        if self.connected {
            Ok(())
        } else {
            Err(CurveError::Disconnected)
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn points(&self) -> &[GluingPoint] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn chi_total(&self) -> i64 {
        self.chi_total
    }

    /// Arithmetic genus `1 - chi(O_X)`.
    pub fn genus(&self) -> i64 {
        self.genus
    }

    pub fn connected(&self) -> bool {
        self.connected
    }

    pub fn all(&self) -> ComponentSet {
        ComponentSet::full(self.n())
    }

    pub fn component_id(&self, i: usize) -> &str {
        &self.components[i].id
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    pub fn point_index(&self, id: &str) -> Option<usize> {
        self.points.iter().position(|p| p.id == id)
    }

    pub fn point(&self, id: &str) -> Result<&GluingPoint, CurveError> {
        self.points
            .iter()
            .find(|p| p.id == id)
            .ok_or_else(|| CurveError::UnknownPoint(id.to_string()))
    }

    /// Comma separated component ids of a set, e.g. `C1,C3`.
    pub fn set_ids(&self, set: ComponentSet) -> String {
        set.iter().map(|i| self.component_id(i)).collect::<Vec<_>>().join(",")
    }

    /// `chi(O_D)` for the subcurve with the given members.
    pub fn chi_of(&self, set: ComponentSet) -> i64 {
        let comps: i64 = set.iter().map(|i| self.components[i].chi).sum();
        let drop: i64 = self.points.iter().map(|p| p.delta_on(set)).sum();
        comps - drop
    }

    /// Intersection number of `set` with its complement, read off from chi
    /// additivity: `chi_D + chi_Dbar - alpha_D = chi_X`.
    pub fn alpha(&self, set: ComponentSet) -> i64 {
        let rest = self.all().difference(set);
        self.chi_of(set) + self.chi_of(rest) - self.chi_total
    }

    /// Connected pieces of the subcurve `set`, in lexicographic order.
    pub fn connected_pieces(&self, set: ComponentSet) -> Vec<ComponentSet> {
        let mut parent: Vec<usize> = (0..self.n()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for p in &self.points {
            let inside: Vec<usize> = p.incident.iter().copied().filter(|&c| set.contains(c)).collect();
            for w in inside.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut pieces: Vec<ComponentSet> = Vec::new();
        let mut roots: Vec<usize> = Vec::new();
        for i in set.iter() {
            let r = find(&mut parent, i);
            match roots.iter().position(|&x| x == r) {
                Some(k) => pieces[k].insert(i),
                None => {
                    roots.push(r);
                    pieces.push(ComponentSet::singleton(i));
                }
            }
        }
        pieces.sort();
        pieces
    }

    pub fn is_connected_set(&self, set: ComponentSet) -> bool {
        !set.is_empty() && self.connected_pieces(set).len() == 1
    }

    pub fn subcurve(&self, members: ComponentSet) -> Subcurve {
        Subcurve {
            members,
            chi: self.chi_of(members),
            alpha: self.alpha(members),
            connected: self.is_connected_set(members),
        }
    }

    /// All proper nonempty connected subcurves, lexicographically ordered.
    pub fn connected_subcurves(&self) -> Vec<Subcurve> {
        self.connected_subcurves_of(self.all())
    }

    /// Proper nonempty connected subcurves of the subcurve `within`. The
    /// invariants are computed relative to the whole curve.
    pub fn connected_subcurves_of(&self, within: ComponentSet) -> Vec<Subcurve> {
        assert!(
            within.len() <= MAX_ENUMERATED_COMPONENTS,
            "subcurve enumeration limited to {MAX_ENUMERATED_COMPONENTS} components"
        );
        let mut out: Vec<Subcurve> = within
            .proper_subsets()
            .filter(|&s| self.is_connected_set(s))
            .map(|s| self.subcurve(s))
            .collect();
        out.sort_by_key(|s| s.members);
        out
    }

    /// Tree-like: every gluing point is a node and removing any of them
    /// disconnects the curve.
    pub fn is_tree_like(&self) -> bool {
        self.is_tree_like_on(self.all())
    }

    /// Tree-like test for the subcurve `set` (only points with at least two
    /// branches in `set` are considered).
    pub fn is_tree_like_on(&self, set: ComponentSet) -> bool {
        if !self.is_connected_set(set) {
            return false;
        }
        let mut edges = 0;
        for p in &self.points {
            let inside = p.incident_set().intersection(set).len();
            if inside >= 2 {
                if p.kind != PointKind::Node && !(inside == 2 && matches!(p.kind, PointKind::PlanarTriple | PointKind::SpatialTriple)) {
                    return false;
                }
                edges += 1;
            }
        }
        edges + 1 == set.len()
    }

    /// The subcurve `set` as a curve of its own, components renumbered in
    /// ascending order. Returns the curve and the local-to-global index map.
    pub fn restrict(&self, set: ComponentSet) -> (CurveGraph, Vec<usize>) {
        let map: Vec<usize> = set.iter().collect();
        let components = map.iter().map(|&i| self.components[i].clone()).collect();
        let mut points = Vec::new();
        for p in &self.points {
            let inside: Vec<usize> = p
                .incident
                .iter()
                .filter_map(|c| map.iter().position(|m| m == c))
                .collect();
            if inside.len() < 2 {
                continue;
            }
            let kind = match (p.kind, inside.len()) {
                (PointKind::PlanarTriple, 2) | (PointKind::SpatialTriple, 2) => PointKind::Node,
                (k, _) => k,
            };
            points.push(GluingPoint {
                id: p.id.clone(),
                kind,
                incident: inside,
            });
        }
        let curve = CurveGraph::new(components, points).expect("restriction of a valid curve is valid");
        (curve, map)
    }

    /// Serializes the curve in the line-oriented text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.components {
            out.push_str(&format!("component {} chi={}\n", c.id, c.chi));
        }
        for p in &self.points {
            let inc: Vec<&str> = p.incident.iter().map(|&i| self.component_id(i)).collect();
            out.push_str(&format!("point {} kind={} incident={}\n", p.id, p.kind, inc.join(",")));
        }
        out
    }
}

/// Curve families with a fixed dual graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetKind {
    /// Cycle of rational curves (type `I_N`).
    In,
    /// Two rational curves with a tacnode.
    III,
    /// Three rational curves through a planar triple point.
    IV,
    /// Three rational curves through a spatial triple point.
    Xprime,
    /// Chain of rational curves joined by nodes.
    Chain,
    /// Rational curves attached by nodes to one central component.
    Star,
}

impl FromStr for PresetKind {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I_N" | "IN" => Ok(PresetKind::In),
            "III" => Ok(PresetKind::III),
            "IV" => Ok(PresetKind::IV),
            "Xprime" | "X'" => Ok(PresetKind::Xprime),
            "chain" => Ok(PresetKind::Chain),
            "star" => Ok(PresetKind::Star),
            other => Err(CurveError::InvalidPreset(format!("unknown preset `{other}`"))),
        }
    }
}

/// Parses a preset name, accepting `I_<n>` shorthand. Returns the kind and
/// the component count implied by the name, if any.
pub fn parse_preset_name(s: &str) -> Result<(PresetKind, Option<usize>), CurveError> {
    if let Some(rest) = s.strip_prefix("I_") {
        if let Ok(n) = rest.parse::<usize>() {
            return Ok((PresetKind::In, Some(n)));
        }
    }
    let kind: PresetKind = s.parse()?;
    let implied = match kind {
        PresetKind::III => Some(2),
        PresetKind::IV | PresetKind::Xprime => Some(3),
        _ => None,
    };
    Ok((kind, implied))
}

fn node(id: String, a: usize, b: usize) -> GluingPoint {
    GluingPoint {
        id,
        kind: PointKind::Node,
        incident: vec![a.min(b), a.max(b)],
    }
}

/// Builds one of the preset curves with rational components `C1..Cn`.
pub fn kodaira_preset(kind: PresetKind, n: usize) -> Result<CurveGraph, CurveError> {
    let bad = |msg: &str| Err(CurveError::InvalidPreset(msg.to_string()));
    let comps = |n: usize| (1..=n).map(|i| Component::new(format!("C{i}"), 1)).collect::<Vec<_>>();
    let (components, points) = match kind {
        PresetKind::In => {
            if n < 2 {
                return bad("I_N needs n >= 2");
            }
            let points = (0..n).map(|i| node(format!("P{}", i + 1), i, (i + 1) % n)).collect();
            (comps(n), points)
        }
        PresetKind::III => {
            if n != 2 {
                return bad("III needs n = 2");
            }
            let p = GluingPoint {
                id: "P1".into(),
                kind: PointKind::Tacnode,
                incident: vec![0, 1],
            };
            (comps(2), vec![p])
        }
        PresetKind::IV | PresetKind::Xprime => {
            if n != 3 {
                return bad("IV and Xprime need n = 3");
            }
            let k = if kind == PresetKind::IV {
                PointKind::PlanarTriple
            } else {
                PointKind::SpatialTriple
            };
            let p = GluingPoint {
                id: "P1".into(),
                kind: k,
                incident: vec![0, 1, 2],
            };
            (comps(3), vec![p])
        }
        PresetKind::Chain => {
            if n < 2 {
                return bad("chain needs n >= 2");
            }
            let points = (0..n - 1).map(|i| node(format!("P{}", i + 1), i, i + 1)).collect();
            (comps(n), points)
        }
        PresetKind::Star => {
            if n < 2 {
                return bad("star needs n >= 2");
            }
            let center = if n == 2 { 0 } else { n - 2 };
            let points = (0..n)
                .filter(|&i| i != center)
                .enumerate()
                .map(|(k, i)| node(format!("P{}", k + 1), i, center))
                .collect();
            (comps(n), points)
        }
    };
    CurveGraph::new(components, points)
}

/// Parses the curve text format and returns a connected curve.
pub fn build_curve(text: &str) -> Result<CurveGraph, CurveError> {
    let mut components: Vec<Component> = Vec::new();
    let mut raw_points: Vec<(usize, String, String, Vec<String>)> = Vec::new();
    let mut preset: Option<(usize, PresetKind, Option<usize>)> = None;

    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |msg: String| CurveError::Parse { line: ln, msg };
        let mut words = line.split_whitespace();
        let head = words.next().unwrap_or_default();
        let rest: Vec<&str> = words.collect();
        let field = |key: &str| -> Option<&str> {
            rest.iter().find_map(|w| w.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
        };
        match head {
            "component" => {
                let id = rest.first().filter(|w| !w.contains('=')).ok_or_else(|| perr("missing component id".into()))?;
                let chi = field("chi")
                    .ok_or_else(|| perr("missing chi=".into()))?
                    .parse::<i64>()
                    .map_err(|e| perr(format!("bad chi: {e}")))?;
                if components.iter().any(|c| c.id == *id) {
                    return Err(CurveError::DuplicateId(id.to_string()));
                }
                components.push(Component::new(*id, chi));
            }
            "point" => {
                let id = rest.first().filter(|w| !w.contains('=')).ok_or_else(|| perr("missing point id".into()))?;
                let kind = field("kind").ok_or_else(|| perr("missing kind=".into()))?;
                let inc = field("incident").ok_or_else(|| perr("missing incident=".into()))?;
                let inc = inc.split(',').map(|s| s.trim().to_string()).collect();
                raw_points.push((ln, id.to_string(), kind.to_string(), inc));
            }
            "preset" => {
                let name = rest.first().ok_or_else(|| perr("missing preset name".into()))?;
                let (kind, implied) = parse_preset_name(name)?;
                let n = match field("n") {
                    Some(v) => Some(v.parse::<usize>().map_err(|e| perr(format!("bad n: {e}")))?),
                    None => implied,
                };
                if preset.is_some() {
                    return Err(perr("more than one preset line".into()));
                }
                preset = Some((ln, kind, n));
            }
            other => return Err(perr(format!("unknown directive `{other}`"))),
        }
    }

    if let Some((ln, kind, n)) = preset {
        if !components.is_empty() || !raw_points.is_empty() {
            return Err(CurveError::Parse {
                line: ln,
                msg: "preset cannot be combined with explicit components or points".into(),
            });
        }
        let n = n.ok_or_else(|| CurveError::Parse {
            line: ln,
            msg: "preset needs n=".into(),
        })?;
        return kodaira_preset(kind, n);
    }

    let mut points = Vec::new();
    for (ln, id, kind, inc) in raw_points {
        let kind: PointKind = kind.parse()?;
        let mut incident = Vec::new();
        for c in inc {
            let idx = components
                .iter()
                .position(|x| x.id == c)
                .ok_or(CurveError::UnknownComponent(c.clone()))?;
            if incident.contains(&idx) {
                return Err(CurveError::Parse {
                    line: ln,
                    msg: format!("component `{c}` listed twice"),
                });
            }
            incident.push(idx);
        }
        points.push(GluingPoint { id, kind, incident });
    }
    let curve = CurveGraph::new(components, points)?;
    curve.require_connected()?;
    Ok(curve)
}

/// How a gluing point is resolved by a transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitMode {
    /// Separate every branch (legal at every kind).
    Separate,
    /// Tacnode to node.
    ToNode,
    /// Planar triple point to spatial triple point.
    ToSpatial,
    /// Keep the two given components glued at a node, separate the third.
    KeepPair(usize, usize),
}

/// A finite birational map `target -> source` that is an isomorphism away
/// from one gluing point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transform {
    pub source: CurveGraph,
    pub target: CurveGraph,
    pub point: String,
    /// `genus(source) - genus(target)`.
    pub genus_drop: i64,
    /// Target component index to source component index.
    pub component_map: Vec<usize>,
}

/// Partially normalizes `x` at the point `point_id`.
pub fn transform_at(x: &CurveGraph, point_id: &str, mode: SplitMode) -> Result<Transform, CurveError> {
    let idx = x
        .point_index(point_id)
        .ok_or_else(|| CurveError::UnknownPoint(point_id.to_string()))?;
    let p = &x.points[idx];
    let illegal = Err(CurveError::IllegalMode { kind: p.kind, mode });
    let replacement: Option<GluingPoint> = match (p.kind, mode) {
        (_, SplitMode::Separate) => None,
        (PointKind::Tacnode, SplitMode::ToNode) => Some(GluingPoint {
            kind: PointKind::Node,
            ..p.clone()
        }),
        (PointKind::PlanarTriple, SplitMode::ToSpatial) => Some(GluingPoint {
            kind: PointKind::SpatialTriple,
            ..p.clone()
        }),
        (PointKind::PlanarTriple | PointKind::SpatialTriple, SplitMode::KeepPair(a, b)) => {
            if a == b || !p.incident.contains(&a) || !p.incident.contains(&b) {
                return illegal;
            }
            Some(node(p.id.clone(), a, b))
        }
        _ => return illegal,
    };
    let mut points = x.points.clone();
    match replacement {
        Some(r) => points[idx] = r,
        None => {
            points.remove(idx);
        }
    }
    let target = CurveGraph::new(x.components.clone(), points)?;
    Ok(Transform {
        genus_drop: x.genus - target.genus,
        source: x.clone(),
        component_map: (0..x.n()).collect(),
        point: point_id.to_string(),
        target,
    })
}
