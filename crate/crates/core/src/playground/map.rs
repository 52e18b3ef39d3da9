use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapError {
    #[error("map schema error: {0}")]
    SchemaError(String),
    #[error("segment {index} references unknown node {node:?}")]
    DanglingSegment { index: usize, node: String },
    #[error("segment {a}–{b} does not join lattice neighbours")]
    NonNeighborSegment { a: String, b: String },
    #[error("segment {a}–{b} appears more than once")]
    DuplicateSegment { a: String, b: String },
    #[error("bad start: {0}")]
    BadStart(String),
}

/// Lattice coordinates; `col` grows along +x, `row` along +y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridPos {
    pub col: i64,
    pub row: i64,
}

impl GridPos {
    pub fn is_neighbor(self, other: GridPos) -> bool {
        let (dc, dr) = ((self.col - other.col).abs(), (self.row - other.row).abs());
        dc <= 1 && dr <= 1 && (dc, dr) != (0, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub col: i64,
    pub row: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub icon: Option<String>,
}

impl Node {
    pub fn pos(&self) -> GridPos {
        GridPos {
            col: self.col,
            row: self.row,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: String,
    pub b: String,
    pub darkness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartPose {
    pub node: String,
    /// Degrees, a multiple of 45; 0 is +x, counter-clockwise positive.
    pub heading: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    pitch_mm: f64,
    start: StartPose,
    nodes: Vec<Node>,
    segments: Vec<Segment>,
}

/// Validated playground: lattice nodes joined by shaded segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapDoc", into = "MapDoc")]
pub struct PlaygroundMap {
    doc: MapDoc,
    by_pos: HashMap<GridPos, usize>,
    by_id: HashMap<String, usize>,
    edges: HashMap<(usize, usize), usize>,
}

impl From<PlaygroundMap> for MapDoc {
    fn from(m: PlaygroundMap) -> Self {
        m.doc
    }
}

impl TryFrom<MapDoc> for PlaygroundMap {
    type Error = MapError;

    fn try_from(doc: MapDoc) -> Result<Self, MapError> {
        let schema = |m: String| Err(MapError::SchemaError(m));
        if !(doc.pitch_mm > 0.0 && doc.pitch_mm.is_finite()) {
            return schema(format!("pitch_mm must be positive, got {}", doc.pitch_mm));
        }
        let mut by_pos = HashMap::new();
        let mut by_id = HashMap::new();
        for (i, n) in doc.nodes.iter().enumerate() {
            if by_id.insert(n.id.clone(), i).is_some() {
                return schema(format!("duplicate node id {:?}", n.id));
            }
            if by_pos.insert(n.pos(), i).is_some() {
                return schema(format!("two nodes at col {} row {}", n.col, n.row));
            }
        }
        let mut edges = HashMap::new();
        for (index, s) in doc.segments.iter().enumerate() {
            if !(0.0..=1.0).contains(&s.darkness) {
                return schema(format!(
                    "segment {index} darkness {} outside [0, 1]",
                    s.darkness
                ));
            }
            let lookup = |id: &String| {
                by_id
                    .get(id)
                    .copied()
                    .ok_or_else(|| MapError::DanglingSegment {
                        index,
                        node: id.clone(),
                    })
            };
            let (a, b) = (lookup(&s.a)?, lookup(&s.b)?);
            if !doc.nodes[a].pos().is_neighbor(doc.nodes[b].pos()) {
                return Err(MapError::NonNeighborSegment {
                    a: s.a.clone(),
                    b: s.b.clone(),
                });
            }
            if edges.insert((a.min(b), a.max(b)), index).is_some() {
                return Err(MapError::DuplicateSegment {
                    a: s.a.clone(),
                    b: s.b.clone(),
                });
            }
        }
        if !by_id.contains_key(&doc.start.node) {
            return Err(MapError::BadStart(format!(
                "unknown node {:?}",
                doc.start.node
            )));
        }
        if doc.start.heading.rem_euclid(45) != 0 || !(0..360).contains(&doc.start.heading) {
            return Err(MapError::BadStart(format!(
                "heading {} is not one of 0, 45, …, 315",
                doc.start.heading
            )));
        }
        Ok(Self {
            doc,
            by_pos,
            by_id,
            edges,
        })
    }
}

const DEFAULT_MAP: &str = include_str!("default_map.json");

/// Parses and validates a map document.
pub fn load_map(text: &str) -> Result<PlaygroundMap, MapError> {
    serde_json::from_str::<MapDoc>(text)
        .map_err(|e| MapError::SchemaError(e.to_string()))?
        .try_into()
}

impl PlaygroundMap {
    /// The bundled 5×5 map.
    pub fn default_map() -> Self {
        load_map(DEFAULT_MAP).expect("bundled map is valid")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.doc).expect("map serialises")
    }

    pub fn pitch_mm(&self) -> f64 {
        self.doc.pitch_mm
    }

    pub fn nodes(&self) -> &[Node] {
        &self.doc.nodes
    }

    pub fn segments(&self) -> &[Segment] {
        &self.doc.segments
    }

    pub fn start(&self) -> &StartPose {
        &self.doc.start
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.by_id.get(id).map(|&i| &self.doc.nodes[i])
    }

    pub fn node_at(&self, pos: GridPos) -> Option<&Node> {
        self.by_pos.get(&pos).map(|&i| &self.doc.nodes[i])
    }

    /// The segment joining the nodes at `a` and `b`, if any.
    pub fn segment_between(&self, a: GridPos, b: GridPos) -> Option<&Segment> {
        let (ia, ib) = (*self.by_pos.get(&a)?, *self.by_pos.get(&b)?);
        self.edges
            .get(&(ia.min(ib), ia.max(ib)))
            .map(|&s| &self.doc.segments[s])
    }

    /// Millimetre position of a lattice point.
    pub fn position_mm(&self, pos: GridPos) -> (f64, f64) {
        (
            pos.col as f64 * self.doc.pitch_mm,
            pos.row as f64 * self.doc.pitch_mm,
        )
    }

    /// Nearest lattice point to a millimetre position.
    pub fn snap(&self, x_mm: f64, y_mm: f64) -> GridPos {
        GridPos {
            col: (x_mm / self.doc.pitch_mm).round() as i64,
            row: (y_mm / self.doc.pitch_mm).round() as i64,
        }
    }

    pub fn icons(&self) -> impl Iterator<Item = (&str, &Node)> {
        self.doc
            .nodes
            .iter()
            .filter_map(|n| n.icon.as_deref().map(|i| (i, n)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_nodes(b_col: i64, segments: &str) -> String {
        format!(
            r#"{{"pitch_mm":110,"start":{{"node":"A","heading":0}},
            "nodes":[{{"id":"A","col":0,"row":0}},{{"id":"B","col":{b_col},"row":0,"icon":"tree"}}],
            "segments":{segments}}}"#
        )
    }

    #[test]
    fn loads_minimal_map() {
        let m = load_map(&two_nodes(1, r#"[{"a":"A","b":"B","darkness":0.5}]"#)).unwrap();
        let seg = m
            .segment_between(GridPos { col: 1, row: 0 }, GridPos { col: 0, row: 0 })
            .unwrap();
        assert_eq!(seg.darkness, 0.5);
        assert_eq!(m.icons().count(), 1);
    }

    #[test]
    fn rejects_bad_segments() {
        assert_eq!(
            load_map(&two_nodes(1, r#"[{"a":"A","b":"Z","darkness":0}]"#)).unwrap_err(),
            MapError::DanglingSegment {
                index: 0,
                node: "Z".into()
            }
        );
        assert!(matches!(
            load_map(&two_nodes(2, r#"[{"a":"A","b":"B","darkness":0}]"#)),
            Err(MapError::NonNeighborSegment { .. })
        ));
        assert!(matches!(
            load_map(&two_nodes(
                1,
                r#"[{"a":"A","b":"B","darkness":0},{"a":"B","b":"A","darkness":1}]"#
            )),
            Err(MapError::DuplicateSegment { .. })
        ));
        assert!(matches!(
            load_map(&two_nodes(1, r#"[{"a":"A","b":"A","darkness":0}]"#)),
            Err(MapError::NonNeighborSegment { .. })
        ));
        assert!(matches!(
            load_map(&two_nodes(1, r#"[{"a":"A","b":"B","darkness":1.5}]"#)),
            Err(MapError::SchemaError(_))
        ));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(load_map("{"), Err(MapError::SchemaError(_))));
        let bad_start = two_nodes(1, "[]").replace(r#""heading":0"#, r#""heading":30"#);
        assert!(matches!(load_map(&bad_start), Err(MapError::BadStart(_))));
        let missing = two_nodes(1, "[]").replace(r#""node":"A""#, r#""node":"Q""#);
        assert!(matches!(load_map(&missing), Err(MapError::BadStart(_))));
    }

    #[test]
    fn default_map_shape() {
        let m = PlaygroundMap::default_map();
        assert_eq!(m.nodes().len(), 25);
        assert!(m.icons().count() >= 4);
        let darkness: Vec<f64> = m.segments().iter().map(|s| s.darkness).collect();
        assert!(darkness.contains(&0.0) && darkness.contains(&1.0) && darkness.contains(&0.5));
        let again = load_map(&m.to_json()).unwrap();
        assert_eq!(again, m);
    }
}
