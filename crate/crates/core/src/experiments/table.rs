//! Result rows, histograms and their CSV forms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minet::MeasureMoments;
use crate::quantum_state::{AttackSpec, Direction, TargetStrategy};

/// First line of every CSV written by this crate.
pub const SCHEMA_LINE: &str = "# schema=1";

/// Which calculation produced a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Exact ground state.
    Exact,
    /// Per-network self-consistent mean field.
    Mf,
    /// Uniform mean field in closed form.
    Mf0,
}

impl Source {
    pub fn label(self) -> &'static str {
        match self {
            Source::Exact => "exact",
            Source::Mf => "mf",
            Source::Mf0 => "mf0",
        }
    }
}

/// Network measure summarized by a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// `k_i/(n−1)` per node.
    KNorm,
    /// Weighted clustering per node.
    Clustering,
    /// Weighted shortest-path length per pair.
    Distance,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::KNorm, Measure::Clustering, Measure::Distance];

    pub fn label(self) -> &'static str {
        match self {
            Measure::KNorm => "k_norm",
            Measure::Clustering => "clustering",
            Measure::Distance => "distance",
        }
    }
}

/// Moments of one pooled measure at one field value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub source: Source,
    pub model: String,
    pub n: usize,
    pub h: f64,
    pub lambda: f64,
    pub measure: Measure,
    pub mean: f64,
    pub width: f64,
    pub skew: f64,
    pub sample_count: usize,
    pub excluded_infinite_count: usize,
    pub attack_direction: Option<Direction>,
    pub attack_q: Option<f64>,
    pub attack_fraction: Option<f64>,
    pub attack_strategy: Option<TargetStrategy>,
    pub realizations: usize,
    pub seed: u64,
    /// Mean over networks of each network's own sample mean.
    pub per_network_mean: f64,
    /// Standard error of `per_network_mean`.
    pub per_network_sem: f64,
    pub failed_networks: usize,
}

impl ResultRow {
    /// `width/√count` of the pooled sample.
    pub fn standard_error(&self) -> f64 {
        if self.sample_count == 0 {
            f64::NAN
        } else {
            self.width / (self.sample_count as f64).sqrt()
        }
    }

    pub fn attack(&self) -> Option<AttackSpec> {
        Some(AttackSpec {
            direction: self.attack_direction?,
            q: self.attack_q?,
            fraction: self.attack_fraction?,
            strategy: self.attack_strategy?,
        })
    }

    pub fn set_attack(&mut self, attack: Option<AttackSpec>) {
        self.attack_direction = attack.map(|a| a.direction);
        self.attack_q = attack.map(|a| a.q);
        self.attack_fraction = attack.map(|a| a.fraction);
        self.attack_strategy = attack.map(|a| a.strategy);
    }

    /// Fills the statistics from `moments`, or marks an empty sample.
    pub fn set_moments(&mut self, m: Option<MeasureMoments>, total: usize) {
        match m {
            Some(m) => {
                self.mean = m.mean;
                self.width = m.width;
                self.skew = m.skew;
                self.sample_count = m.count;
                self.excluded_infinite_count = m.excluded;
            }
            None => {
                // every sample infinite, or nothing to pool
                self.mean = if total > 0 { f64::INFINITY } else { f64::NAN };
                self.width = f64::NAN;
                self.skew = f64::NAN;
                self.sample_count = 0;
                self.excluded_infinite_count = total;
            }
        }
    }
}

/// Label of an attack variant used in file names and reports.
pub fn variant_tag(attack: Option<&AttackSpec>) -> String {
    match attack {
        None => "none".into(),
        Some(a) => format!(
            "{}_q{}_f{}_{}",
            a.direction.label(),
            a.q,
            a.fraction,
            a.strategy.label()
        ),
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub fn to_csv(&self) -> Result<String> {
        write_csv(&self.rows)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        Ok(Self {
            rows: read_csv(text)?,
        })
    }

    /// Rows matching a source, measure and attack variant, in grid order.
    pub fn select(
        &self,
        source: Source,
        measure: Measure,
        attack: Option<AttackSpec>,
    ) -> impl Iterator<Item = &ResultRow> + '_ {
        self.rows
            .iter()
            .filter(move |r| r.source == source && r.measure == measure && r.attack() == attack)
    }
}

/// Serializes records under the schema line with a header row.
pub fn write_csv<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(true)
        .from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let body = w.into_inner().map_err(|e| Error::Csv(e.to_string()))?;
    let body = String::from_utf8(body).map_err(|e| Error::Csv(e.to_string()))?;
    Ok(format!("{SCHEMA_LINE}\n{body}"))
}

/// Parses records written by [`write_csv`]; the schema line is required.
pub fn read_csv<R: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<R>> {
    let first = text.lines().next().unwrap_or("");
    if first.trim() != SCHEMA_LINE {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected `{SCHEMA_LINE}`, got `{first}`"),
        });
    }
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in r.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}

/// Fixed-width histogram.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct BinRow {
    bin_left: f64,
    bin_right: f64,
    count: u64,
}

impl Histogram {
    /// `bins` equal bins over `[lo, hi]`; values outside are clamped into the
    /// end bins and non-finite values skipped. A degenerate range is widened
    /// to `[lo − ½, lo + ½]`.
    pub fn build(samples: &[f64], bins: usize, lo: f64, hi: f64) -> Self {
        let (lo, hi) = if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, lo + 0.5)
        };
        let step = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins)
            .map(|b| if b == bins { hi } else { lo + step * b as f64 })
            .collect();
        let mut counts = vec![0u64; bins];
        for &x in samples.iter().filter(|x| x.is_finite()) {
            let b = ((x - lo) / step).floor();
            let b = if b < 0.0 {
                0
            } else {
                (b as usize).min(bins - 1)
            };
            counts[b] += 1;
        }
        Self { edges, counts }
    }

    /// Unit-width bins centred on the integers `0..=max`.
    pub fn integer(samples: &[f64]) -> Self {
        let max = samples
            .iter()
            .copied()
            .filter(|x| x.is_finite())
            .fold(0.0f64, f64::max)
            .round();
        Self::build(samples, max as usize + 1, -0.5, max + 0.5)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn to_csv(&self) -> Result<String> {
        let rows: Vec<BinRow> = self
            .counts
            .iter()
            .enumerate()
            .map(|(b, &count)| BinRow {
                bin_left: self.edges[b],
                bin_right: self.edges[b + 1],
                count,
            })
            .collect();
        write_csv(&rows)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let rows: Vec<BinRow> = read_csv(text)?;
        if rows.is_empty() {
            return Err(Error::Parse {
                line: 2,
                msg: "histogram has no bins".into(),
            });
        }
        let mut edges: Vec<f64> = rows.iter().map(|r| r.bin_left).collect();
        edges.push(rows[rows.len() - 1].bin_right);
        Ok(Self {
            edges,
            counts: rows.iter().map(|r| r.count).collect(),
        })
    }
}

/// Linearly interpolated percentile `p ∈ [0, 100]` of the finite samples.
pub fn percentile(samples: &[f64], p: f64) -> Option<f64> {
    let mut v: Vec<f64> = samples.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let pos = p / 100.0 * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Some(v[lo] + (v[hi] - v[lo]) * (pos - lo as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> ResultRow {
        ResultRow {
            source: Source::Exact,
            model: "ER".into(),
            n: 6,
            h: 0.5,
            lambda: 0.1,
            measure: Measure::Distance,
            mean: 2.0,
            width: f64::NAN,
            skew: 0.0,
            sample_count: 3,
            excluded_infinite_count: 1,
            attack_direction: None,
            attack_q: None,
            attack_fraction: None,
            attack_strategy: None,
            realizations: 1,
            seed: 9,
            per_network_mean: f64::INFINITY,
            per_network_sem: 0.0,
            failed_networks: 0,
        }
    }

    #[test]
    fn table_round_trip() {
        let mut a = row();
        let mut b = row();
        b.set_attack(Some(AttackSpec {
            direction: Direction::X,
            q: 0.5,
            fraction: 0.2,
            strategy: TargetStrategy::Preferential,
        }));
        b.measure = Measure::KNorm;
        b.width = 0.5;
        let t = ResultTable {
            rows: vec![a.clone(), b.clone()],
        };
        let text = t.to_csv().unwrap();
        assert!(text.starts_with("# schema=1\nsource,model,n,h,lambda,measure,mean,width,skew,"));
        let back = ResultTable::from_csv(&text).unwrap();
        assert!(back.rows[0].width.is_nan());
        a.width = 0.0;
        let mut r0 = back.rows[0].clone();
        r0.width = 0.0;
        assert_eq!(r0, a);
        assert_eq!(back.rows[1], b);
        assert_eq!(
            back.rows[1].attack().unwrap().strategy,
            TargetStrategy::Preferential
        );
    }

    #[test]
    fn missing_schema_rejected() {
        assert!(matches!(
            ResultTable::from_csv("source\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn histogram_counts_and_round_trip() {
        let h = Histogram::build(&[0.0, 0.1, 0.5, 1.0, f64::INFINITY], 4, 0.0, 1.0);
        assert_eq!(h.counts, vec![2, 0, 1, 1]);
        assert_eq!(Histogram::from_csv(&h.to_csv().unwrap()).unwrap(), h);
        let d = Histogram::build(&[2.0, 2.0], 3, 2.0, 2.0);
        assert_eq!(d.total(), 2);
        let i = Histogram::integer(&[0.0, 1.0, 1.0, 3.0]);
        assert_eq!(i.counts, vec![1, 2, 0, 1]);
    }

    #[test]
    fn percentile_interpolates() {
        let v = [4.0, 1.0, 3.0, 2.0, 5.0];
        assert_eq!(percentile(&v, 50.0), Some(3.0));
        assert_eq!(percentile(&v, 100.0), Some(5.0));
        assert!((percentile(&v, 95.0).unwrap() - 4.8).abs() < 1e-12);
        assert_eq!(percentile(&[], 95.0), None);
    }
}
