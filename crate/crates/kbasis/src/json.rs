//! Wire formats. Graphs serialize as vertex and edge lists with explicit
//! ids; embeddings add rotations over half-edge ids (`2*edge + end`), the
//! dummy registry and an optional outer face; bases are index lists over a
//! graph.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cycle_space::EdgeSet;
use crate::embedding::{FaceId, HalfEdge, OnePlaneEmbedding};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeJson>,
}

impl GraphJson {
    pub fn from_graph(g: &Graph) -> Self {
        GraphJson {
            vertices: g.vertices().collect(),
            edges: g
                .edges()
                .map(|e| EdgeJson {
                    id: e.id,
                    u: e.u,
                    v: e.v,
                })
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        let mut g = Graph::new();
        for &v in &self.vertices {
            g.add_vertex_id(v);
        }
        for e in &self.edges {
            g.add_edge_id(e.id, e.u, e.v)?;
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DummyJson {
    pub vertex: VertexId,
    pub pair: [EdgeId; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub graph: GraphJson,
    pub rotations: BTreeMap<VertexId, Vec<HalfEdge>>,
    pub dummies: Vec<DummyJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer_face: Option<FaceId>,
}

impl EmbeddingJson {
    pub fn from_embedding(e: &OnePlaneEmbedding) -> Self {
        EmbeddingJson {
            graph: GraphJson::from_graph(&e.graph),
            rotations: e.rotations.clone(),
            dummies: e
                .dummies
                .iter()
                .map(|(&vertex, &(a, b))| DummyJson {
                    vertex,
                    pair: [a, b],
                })
                .collect(),
            outer_face: e.outer_face,
        }
    }

    pub fn to_embedding(&self) -> Result<OnePlaneEmbedding> {
        let graph = self.graph.to_graph()?;
        let dummies: BTreeMap<VertexId, (EdgeId, EdgeId)> = self
            .dummies
            .iter()
            .map(|d| (d.vertex, (d.pair[0], d.pair[1])))
            .collect();
        OnePlaneEmbedding::checked(graph, self.rotations.clone(), dummies, self.outer_face)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisJson {
    pub graph: GraphJson,
    pub elements: Vec<Vec<EdgeId>>,
}

impl BasisJson {
    pub fn new(g: &Graph, sets: &[EdgeSet]) -> Self {
        BasisJson {
            graph: GraphJson::from_graph(g),
            elements: sets.iter().map(|s| s.iter().collect()).collect(),
        }
    }

    pub fn to_parts(&self) -> Result<(Graph, Vec<EdgeSet>)> {
        let g = self.graph.to_graph()?;
        let width = g.edge_capacity();
        let mut sets = Vec::with_capacity(self.elements.len());
        for el in &self.elements {
            for &e in el {
                if !g.has_edge(e) {
                    return Err(Error::ForeignEdges(vec![e]));
                }
            }
            sets.push(EdgeSet::from_edges(width, el.iter().copied()));
        }
        Ok((g, sets))
    }
}

/// FNV-1a over the canonical JSON of an embedding; fixtures carry it so
/// hand edits are caught at load time.
pub fn transcription_checksum(e: &EmbeddingJson) -> u64 {
    let text = serde_json::to_string(e).expect("embedding serializes");
    let mut h: u64 = 0xcbf29ce484222325;
    for b in text.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureJson {
    pub name: String,
    pub figure: String,
    pub embedding: EmbeddingJson,
    pub checksum: u64,
}

impl FixtureJson {
    pub fn new(name: &str, figure: &str, embedding: &OnePlaneEmbedding) -> Self {
        let embedding = EmbeddingJson::from_embedding(embedding);
        let checksum = transcription_checksum(&embedding);
        FixtureJson {
            name: name.to_string(),
            figure: figure.to_string(),
            embedding,
            checksum,
        }
    }

    pub fn load(text: &str) -> Result<(Self, OnePlaneEmbedding)> {
        let fixture: FixtureJson = serde_json::from_str(text)?;
        let expect = transcription_checksum(&fixture.embedding);
        if expect != fixture.checksum {
            return Err(Error::FixtureCorrupt(format!(
                "{}: checksum {:x} != recorded {:x}",
                fixture.name, expect, fixture.checksum
            )));
        }
        let emb = fixture.embedding.to_embedding()?;
        Ok((fixture, emb))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_roundtrip() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        let j = GraphJson::from_graph(&g);
        let text = serde_json::to_string(&j).unwrap();
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_graph().unwrap(), g);
    }

    #[test]
    fn embedding_roundtrip_and_checksum() {
        let emb = crate::embedding::tests::k4_crossing();
        let j = EmbeddingJson::from_embedding(&emb);
        let text = serde_json::to_string(&j).unwrap();
        let back: EmbeddingJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_embedding().unwrap(), emb);

        let fixture = FixtureJson::new("k4", "test", &emb);
        let text = serde_json::to_string(&fixture).unwrap();
        let (_, emb2) = FixtureJson::load(&text).unwrap();
        assert_eq!(emb2, emb);

        let mut corrupted = serde_json::to_value(&fixture).unwrap();
        corrupted["checksum"] = serde_json::json!(12345);
        let text = serde_json::to_string(&corrupted).unwrap();
        assert!(matches!(
            FixtureJson::load(&text),
            Err(Error::FixtureCorrupt(_))
        ));
    }

    #[test]
    fn basis_roundtrip_rejects_foreign_edges() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let j = BasisJson {
            graph: GraphJson::from_graph(&g),
            elements: vec![vec![0, 1, 2], vec![7]],
        };
        assert!(matches!(j.to_parts(), Err(Error::ForeignEdges(_))));
    }
}
