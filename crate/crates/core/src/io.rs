//! JSON document format for tilings (schema `sphtile-tiling/1`).

use serde::{Deserialize, Serialize};

use crate::mesh::{Face, FaceKind, HalfEdge, Tiling};
use crate::vertex::Corner;
use crate::{Error, Result};

pub const SCHEMA: &str = "sphtile-tiling/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceRecord {
    pub kind: FaceKind,
    /// Corner labels in loop order, aligned with `half_edges`.
    pub corners: [Corner; 4],
    /// Half-edge ids in loop order; each one's successor is the next entry.
    pub half_edges: [usize; 4],
    /// Origin vertex of each half-edge.
    pub vertices: [usize; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TilingDocument {
    pub schema: String,
    pub vertex_count: usize,
    pub faces: Vec<FaceRecord>,
    pub twins: Vec<[usize; 2]>,
}

impl TilingDocument {
    pub fn from_tiling(t: &Tiling) -> Self {
        let faces = (0..t.face_count())
            .map(|f| {
                let hs = t.face_half_edges(f);
                FaceRecord {
                    kind: t.faces()[f].kind,
                    corners: hs.map(|h| t.corner(h)),
                    half_edges: hs,
                    vertices: hs.map(|h| t.origin(h)),
                }
            })
            .collect();
        let twins = (0..t.half_edges().len())
            .filter(|&h| h < t.twin(h))
            .map(|h| [h, t.twin(h)])
            .collect();
        TilingDocument {
            schema: SCHEMA.to_string(),
            vertex_count: t.vertex_count(),
            faces,
            twins,
        }
    }

    pub fn to_tiling(&self) -> Result<Tiling> {
        if self.schema != SCHEMA {
            return Err(Error::Document(format!(
                "unsupported schema {:?}, expected {SCHEMA:?}",
                self.schema
            )));
        }
        let n = 4 * self.faces.len();
        let mut slots: Vec<Option<HalfEdge>> = vec![None; n];
        let mut faces = Vec::with_capacity(self.faces.len());
        for (fi, rec) in self.faces.iter().enumerate() {
            for k in 0..4 {
                let h = rec.half_edges[k];
                if h >= n {
                    return Err(Error::Document(format!(
                        "half-edge id {h} out of range 0..{n}"
                    )));
                }
                if slots[h].is_some() {
                    return Err(Error::Document(format!("half-edge id {h} used twice")));
                }
                slots[h] = Some(HalfEdge {
                    twin: usize::MAX,
                    next: rec.half_edges[(k + 1) % 4],
                    face: fi,
                    origin: rec.vertices[k],
                    corner: rec.corners[k],
                });
            }
            faces.push(Face {
                kind: rec.kind,
                half_edge: rec.half_edges[0],
            });
        }
        let mut half_edges: Vec<HalfEdge> = slots
            .into_iter()
            .map(|s| s.expect("every slot filled"))
            .collect();
        for &[a, b] in &self.twins {
            if a >= n || b >= n {
                return Err(Error::Document(format!(
                    "twin pair [{a}, {b}] out of range"
                )));
            }
            if half_edges[a].twin != usize::MAX || half_edges[b].twin != usize::MAX {
                return Err(Error::Document(format!(
                    "twin pair [{a}, {b}] repeats a half-edge"
                )));
            }
            half_edges[a].twin = b;
            half_edges[b].twin = a;
        }
        if let Some(h) = half_edges.iter().position(|he| he.twin == usize::MAX) {
            return Err(Error::Document(format!("half-edge {h} has no twin")));
        }
        Ok(Tiling::from_parts(half_edges, faces, self.vertex_count)?)
    }
}

pub fn to_json(t: &Tiling) -> String {
    serde_json::to_string_pretty(&TilingDocument::from_tiling(t)).expect("document serializes")
}

pub fn from_json(s: &str) -> Result<Tiling> {
    let doc: TilingDocument = serde_json::from_str(s)?;
    doc.to_tiling()
}

pub fn read_tiling(path: &std::path::Path) -> Result<Tiling> {
    from_json(&std::fs::read_to_string(path)?)
}

pub fn write_tiling(path: &std::path::Path, t: &Tiling) -> Result<()> {
    std::fs::write(path, to_json(t) + "\n")?;
    Ok(())
}
