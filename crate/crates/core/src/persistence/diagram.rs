use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::PersistenceError;

/// Half-open interval `[birth, death)`; `death` is `+∞` for essential classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub birth: f64,
    pub death: f64,
}

impl Interval {
    pub fn new(birth: f64, death: f64) -> Self {
        Self { birth, death }
    }

    pub fn infinite(birth: f64) -> Self {
        Self {
            birth,
            death: f64::INFINITY,
        }
    }

    pub fn length(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_infinite(&self) -> bool {
        self.death == f64::INFINITY
    }

    pub fn contains(&self, t: f64) -> bool {
        self.birth <= t && t < self.death
    }
}

/// Metadata attached to a diagram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default = "two")]
    pub field_characteristic: u32,
}

fn two() -> u32 {
    2
}

impl Default for DiagramMeta {
    fn default() -> Self {
        Self {
            basis_degree: None,
            resolution: None,
            dim: None,
            kind: None,
            field_characteristic: 2,
        }
    }
}

/// Relative length below which an interval is never significant.
pub const NOISE_FLOOR: f64 = 1e-2;

/// Intervals per homology degree `0..=max_degree`, each list sorted by
/// `(birth, death)`. Zero-length intervals are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PersistenceDiagram {
    intervals: Vec<Vec<Interval>>,
    pub meta: DiagramMeta,
}

impl PersistenceDiagram {
    /// Builds a diagram, dropping zero-length intervals and sorting.
    pub fn new(mut intervals: Vec<Vec<Interval>>, meta: DiagramMeta) -> Self {
        for list in &mut intervals {
            list.retain(|i| i.death > i.birth);
            list.sort_by(|a, b| {
                a.birth
                    .total_cmp(&b.birth)
                    .then(a.death.total_cmp(&b.death))
            });
        }
        Self { intervals, meta }
    }

    /// Highest homology degree held, or `None` for a diagram with no degrees.
    pub fn max_degree(&self) -> Option<usize> {
        self.intervals.len().checked_sub(1)
    }

    /// Intervals in degree `p`; empty beyond the stored degrees.
    pub fn degree(&self, p: usize) -> &[Interval] {
        self.intervals.get(p).map_or(&[], Vec::as_slice)
    }

    pub fn degrees(&self) -> &[Vec<Interval>] {
        &self.intervals
    }

    /// Number of intervals containing `t`, per degree.
    pub fn betti_at(&self, t: f64) -> Vec<usize> {
        self.intervals
            .iter()
            .map(|l| l.iter().filter(|i| i.contains(t)).count())
            .collect()
    }

    /// The `k` longest intervals of degree `p`; infinite ones first, ties by
    /// earlier birth.
    pub fn significant_intervals(&self, p: usize, k: usize) -> Vec<Interval> {
        let mut all = self.degree(p).to_vec();
        all.sort_by(|a, b| {
            b.length()
                .total_cmp(&a.length())
                .then(a.birth.total_cmp(&b.birth))
        });
        all.truncate(k);
        all
    }

    /// Distance from the lowest birth to the highest finite endpoint, over
    /// all degrees; zero for a diagram without finite endpoints.
    pub fn value_span(&self) -> f64 {
        let all = self.intervals.iter().flatten();
        let lo = all.clone().map(|i| i.birth).fold(f64::INFINITY, f64::min);
        let hi = all
            .flat_map(|i| [i.birth, i.death])
            .filter(|v| v.is_finite())
            .fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            hi - lo
        } else {
            0.0
        }
    }

    /// Number of intervals of degree `p` standing out from the rest.
    ///
    /// Lengths are sorted descending, with infinite intervals counted as the
    /// value span, and preceded by the span itself. Lengths below
    /// [`NOISE_FLOOR`] times the span are ignored. The count is cut at the
    /// largest ratio between consecutive entries, provided it reaches
    /// `gap_factor`; otherwise every interval above the floor counts. A
    /// degree whose longest interval is small against the span thus has no
    /// significant intervals.
    pub fn significant_count(&self, p: usize, gap_factor: f64) -> usize {
        let list = self.degree(p);
        let span = self.value_span();
        if span <= 0.0 {
            return list.iter().filter(|i| i.is_infinite()).count();
        }
        let mut chain: Vec<f64> = list
            .iter()
            .map(|i| if i.is_infinite() { span } else { i.length() })
            .filter(|l| *l >= NOISE_FLOOR * span)
            .collect();
        chain.push(span);
        chain.sort_by(|a, b| b.total_cmp(a));
        let (cut, ratio) = chain
            .windows(2)
            .enumerate()
            .map(|(i, w)| (i, w[0] / w[1]))
            .fold((0, 0.0), |best, x| if x.1 > best.1 { x } else { best });
        if ratio >= gap_factor {
            cut
        } else {
            chain.len() - 1
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let diagrams: BTreeMap<String, Vec<(f64, Option<f64>)>> = self
            .intervals
            .iter()
            .enumerate()
            .map(|(p, l)| {
                (
                    p.to_string(),
                    l.iter()
                        .map(|i| (i.birth, (!i.is_infinite()).then_some(i.death)))
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({ "meta": self.meta, "diagrams": diagrams })
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<(), PersistenceError> {
        serde_json::to_writer_pretty(writer, &self.to_json_value())
            .map_err(|e| PersistenceError::Parse(e.to_string()))
    }

    pub fn read_json<R: Read>(reader: R) -> Result<Self, PersistenceError> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(default)]
            meta: DiagramMeta,
            diagrams: BTreeMap<String, Vec<(f64, Option<f64>)>>,
        }
        let raw: Raw =
            serde_json::from_reader(reader).map_err(|e| PersistenceError::Parse(e.to_string()))?;
        let mut intervals: Vec<Vec<Interval>> = Vec::new();
        for (key, list) in raw.diagrams {
            let p: usize = key
                .parse()
                .map_err(|_| PersistenceError::Parse(format!("bad degree key {key:?}")))?;
            if intervals.len() <= p {
                intervals.resize(p + 1, Vec::new());
            }
            for (b, d) in list {
                let d = d.unwrap_or(f64::INFINITY);
                if !(b <= d) {
                    return Err(PersistenceError::Parse(format!(
                        "interval [{b}, {d}) is reversed"
                    )));
                }
                intervals[p].push(Interval::new(b, d));
            }
        }
        Ok(Self::new(intervals, raw.meta))
    }

    /// `degree,birth,death` rows with `inf` for essential classes.
    pub fn write_csv<W: Write>(&self, mut writer: W) -> Result<(), PersistenceError> {
        writeln!(writer, "degree,birth,death")?;
        for (p, list) in self.intervals.iter().enumerate() {
            for i in list {
                if i.is_infinite() {
                    writeln!(writer, "{p},{},inf", i.birth)?;
                } else {
                    writeln!(writer, "{p},{},{}", i.birth, i.death)?;
                }
            }
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self, PersistenceError> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut intervals: Vec<Vec<Interval>> = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| PersistenceError::Parse(e.to_string()))?;
            let field = |i: usize| {
                rec.get(i)
                    .ok_or_else(|| PersistenceError::Parse("short row".into()))
            };
            let bad = |s: &str| PersistenceError::Parse(format!("bad number {s:?}"));
            let p: usize = field(0)?.parse().map_err(|_| bad(field(0).unwrap_or("")))?;
            let b: f64 = field(1)?.parse().map_err(|_| bad(field(1).unwrap_or("")))?;
            let d: f64 = field(2)?.parse().map_err(|_| bad(field(2).unwrap_or("")))?;
            if intervals.len() <= p {
                intervals.resize(p + 1, Vec::new());
            }
            intervals[p].push(Interval::new(b, d));
        }
        Ok(Self::new(intervals, DiagramMeta::default()))
    }
}
