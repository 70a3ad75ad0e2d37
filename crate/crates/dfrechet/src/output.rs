//! JSON documents written to standard output or to dump files.

use dfrechet_core::arrangement::ArrangementGraph;
use dfrechet_core::decide::DecisionStats;
use dfrechet_core::Point2;
use serde::Serialize;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Stats {
    pub faces_visited: usize,
    pub toggles_applied: usize,
    pub probes_executed: usize,
    pub phi_rebuilds: usize,
    pub dp_work: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decisions: Option<usize>,
}

impl From<DecisionStats> for Stats {
    fn from(s: DecisionStats) -> Self {
        Stats {
            faces_visited: s.faces_visited,
            toggles_applied: s.toggles_applied,
            probes_executed: s.probes_executed,
            phi_rebuilds: s.phi_rebuilds,
            dp_work: s.dp_work,
            decisions: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    pub toggles_per_trial: usize,
    pub phi_rebuilds_mean: f64,
    pub phi_rebuilds_max: usize,
    pub phi_rebuilds_bound: usize,
    pub within_bound: bool,
    pub backends_agree: bool,
    pub fast_dp_work: u64,
    pub naive_dp_work: u64,
    pub fast_ms: f64,
    pub naive_ms: f64,
    /// Naive time over fast time.
    pub time_ratio: f64,
}

/// The single object printed by every command.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultDocument {
    pub command: String,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feasible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<Stats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bench: Option<BenchReport>,
    pub wall_time_ms: f64,
}

impl ResultDocument {
    pub fn new(command: &str, tolerance: f64) -> Self {
        ResultDocument {
            command: command.to_owned(),
            tolerance,
            backend: None,
            mode: None,
            delta: None,
            feasible: None,
            value: None,
            interval: None,
            witness: None,
            stats: None,
            bench: None,
            wall_time_ms: 0.0,
        }
    }
}

pub fn xy(p: Point2) -> [f64; 2] {
    [p.x, p.y]
}

#[derive(Serialize)]
struct CircleDump {
    id: usize,
    center: [f64; 2],
    radius: f64,
    entries: Vec<[usize; 2]>,
    component: usize,
}

#[derive(Serialize)]
struct VertexDump {
    id: usize,
    point: [f64; 2],
    circles: Vec<usize>,
    component: usize,
}

#[derive(Serialize)]
struct ArcDump {
    id: usize,
    circle: usize,
    from: usize,
    to: usize,
    start_angle: f64,
    end_angle: f64,
}

#[derive(Serialize)]
struct FaceDump {
    id: usize,
    component: usize,
    sample: [f64; 2],
    entries: Vec<[usize; 2]>,
}

#[derive(Serialize)]
struct DualEdgeDump {
    arc: usize,
    inside: usize,
    outside: usize,
    entries: Vec<[usize; 2]>,
}

#[derive(Serialize)]
struct ComponentDump {
    id: usize,
    circles: Vec<usize>,
    outer_face: usize,
}

#[derive(Serialize)]
pub struct ArrangementDump {
    delta: f64,
    tolerance: f64,
    circles: Vec<CircleDump>,
    vertices: Vec<VertexDump>,
    arcs: Vec<ArcDump>,
    faces: Vec<FaceDump>,
    dual_edges: Vec<DualEdgeDump>,
    components: Vec<ComponentDump>,
}

fn entries(list: &[(usize, usize)]) -> Vec<[usize; 2]> {
    list.iter().map(|&(i, j)| [i, j]).collect()
}

impl From<&ArrangementGraph> for ArrangementDump {
    fn from(ag: &ArrangementGraph) -> Self {
        ArrangementDump {
            delta: ag.delta(),
            tolerance: ag.tolerance().eps(),
            circles: ag
                .groups()
                .iter()
                .enumerate()
                .map(|(id, g)| CircleDump {
                    id,
                    center: xy(g.center),
                    radius: ag.delta(),
                    entries: entries(&ag.group_entries(id)),
                    component: g.component,
                })
                .collect(),
            vertices: ag
                .vertices()
                .iter()
                .enumerate()
                .map(|(id, v)| VertexDump {
                    id,
                    point: xy(v.point),
                    circles: v.groups.clone(),
                    component: v.component,
                })
                .collect(),
            arcs: ag
                .arcs()
                .iter()
                .enumerate()
                .map(|(id, a)| ArcDump {
                    id,
                    circle: a.group,
                    from: a.from,
                    to: a.to,
                    start_angle: a.start_angle,
                    end_angle: a.end_angle,
                })
                .collect(),
            faces: ag
                .faces()
                .iter()
                .enumerate()
                .map(|(id, f)| FaceDump {
                    id,
                    component: f.component,
                    sample: xy(f.sample),
                    entries: entries(&f.entries),
                })
                .collect(),
            dual_edges: ag
                .dual_edges()
                .iter()
                .map(|d| DualEdgeDump {
                    arc: d.arc,
                    inside: d.inside,
                    outside: d.outside,
                    entries: entries(&ag.group_entries(ag.arcs()[d.arc].group)),
                })
                .collect(),
            components: ag
                .components()
                .iter()
                .enumerate()
                .map(|(id, c)| ComponentDump {
                    id,
                    circles: c.groups.clone(),
                    outer_face: c.outer_face,
                })
                .collect(),
        }
    }
}
