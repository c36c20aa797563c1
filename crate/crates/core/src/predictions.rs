//! ε-correlated prediction bits and their aggregation.
//!
//! Every (edge, endpoint) or (element, containing set) incidence gets one
//! bit that agrees with a fixed optimal solution with probability `1/2 + ε`,
//! independently of all other bits. A bit is drawn from a ChaCha stream
//! seeded by the table seed at a word position fixed by its incidence key,
//! so each bit is a pure function of `(seed, key)` regardless of the order in
//! which bits are produced.

use std::io::{BufRead, Write};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, domain as domain_err, Error, Result};
use crate::graph::{mask, Graph, SetSystem, VertexId};

/// Value domain of the bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitDomain {
    /// `{0, 1}`: membership in a cover / independent set.
    Binary,
    /// `{-1, +1}`: side of a cut.
    Sign,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Layout {
    /// Bit `2e + slot` belongs to endpoint `slot` of edge `e` (slot 0 is the
    /// smaller vertex id).
    Edges,
    /// Bits of set `j` occupy `offsets[j]..offsets[j + 1]`, one per element
    /// of `S_j` in ascending element order.
    Incidences { offsets: Vec<usize> },
}

/// The optimal solution predictions are correlated with.
#[derive(Debug, Clone, PartialEq)]
pub enum GroundTruth {
    VertexCover(Vec<VertexId>),
    IndependentSet(Vec<VertexId>),
    SetCover(Vec<usize>),
    Cut(Vec<i8>),
}

impl GroundTruth {
    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        let in_range = |s: &[VertexId]| s.iter().all(|&v| v < g.n());
        match self {
            GroundTruth::VertexCover(s) if in_range(s) && g.is_vertex_cover(s) => Ok(()),
            GroundTruth::IndependentSet(s) if in_range(s) && g.is_independent(s) => Ok(()),
            GroundTruth::Cut(x) if x.len() == g.n() && x.iter().all(|&b| b == 1 || b == -1) => {
                Ok(())
            }
            GroundTruth::SetCover(_) => domain("set-cover truth given for a graph"),
            other => domain(format!("ground truth {other:?} is not feasible for this graph")),
        }
    }

    pub fn check_set_system(&self, ss: &SetSystem) -> Result<()> {
        match self {
            GroundTruth::SetCover(j) if j.iter().all(|&j| j < ss.n()) && ss.is_cover(j) => Ok(()),
            other => domain(format!("ground truth {other:?} is not a cover of this set system")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionTable {
    domain: BitDomain,
    layout: Layout,
    bits: Vec<i8>,
    epsilon: f64,
    seed: u64,
}

pub(crate) fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 0.5 {
        Ok(())
    } else {
        domain(format!("epsilon {eps} must lie strictly inside (0, 1/2)"))
    }
}

fn threshold(eps: f64) -> u64 {
    // P(next_u64 < t) = t / 2^64 = 1/2 + ε.
    ((0.5 + eps) * 2f64.powi(64)) as u64
}

/// Whether the bit with incidence `key` agrees with the truth.
pub fn bit_is_correct(seed: u64, key: u64, eps: f64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(2 * key as u128);
    rng.next_u64() < threshold(eps)
}

/// `count` correctness flags for keys `0..count`, streamed.
fn correctness_stream(seed: u64, count: usize, eps: f64) -> impl Iterator<Item = bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = threshold(eps);
    (0..count).map(move |_| rng.next_u64() < t)
}

fn binary_edge_table(
    g: &Graph,
    member: &[bool],
    eps: f64,
    seed: u64,
) -> PredictionTable {
    let mut ok = correctness_stream(seed, 2 * g.m(), eps);
    let mut bits = Vec::with_capacity(2 * g.m());
    for e in g.edges() {
        for v in e.endpoints() {
            let t = member[v] as i8;
            bits.push(if ok.next().unwrap() { t } else { 1 - t });
        }
    }
    PredictionTable {
        domain: BitDomain::Binary,
        layout: Layout::Edges,
        bits,
        epsilon: eps,
        seed,
    }
}

/// Vertex-cover predictions: `b_u(e) = [u ∈ C*]` with probability `1/2 + ε`.
pub fn gen_vc_predictions(
    g: &Graph,
    truth: &GroundTruth,
    eps: f64,
    seed: u64,
) -> Result<PredictionTable> {
    check_epsilon(eps)?;
    let GroundTruth::VertexCover(c) = truth else {
        return domain("vertex-cover predictions need a VertexCover truth");
    };
    truth.check_graph(g)?;
    Ok(binary_edge_table(g, &mask(g.n(), c), eps, seed))
}

/// Independent-set predictions. Non-members get bit 0 with probability
/// `1/2 + ε`, symmetric with the member case.
pub fn gen_mis_predictions(
    g: &Graph,
    truth: &GroundTruth,
    eps: f64,
    seed: u64,
) -> Result<PredictionTable> {
    check_epsilon(eps)?;
    let GroundTruth::IndependentSet(s) = truth else {
        return domain("independent-set predictions need an IndependentSet truth");
    };
    truth.check_graph(g)?;
    Ok(binary_edge_table(g, &mask(g.n(), s), eps, seed))
}

/// Set-cover predictions: one bit `b_j(i)` per element `i` of every set `S_j`.
pub fn gen_sc_predictions(
    ss: &SetSystem,
    truth: &GroundTruth,
    eps: f64,
    seed: u64,
) -> Result<PredictionTable> {
    check_epsilon(eps)?;
    let GroundTruth::SetCover(opt) = truth else {
        return domain("set-cover predictions need a SetCover truth");
    };
    truth.check_set_system(ss)?;
    let member = mask(ss.n(), opt);
    let mut ok = correctness_stream(seed, ss.incidences(), eps);
    let mut offsets = Vec::with_capacity(ss.n() + 1);
    let mut bits = Vec::with_capacity(ss.incidences());
    for (j, s) in ss.sets().iter().enumerate() {
        offsets.push(bits.len());
        let t = member[j] as i8;
        for _ in s {
            bits.push(if ok.next().unwrap() { t } else { 1 - t });
        }
    }
    offsets.push(bits.len());
    Ok(PredictionTable {
        domain: BitDomain::Binary,
        layout: Layout::Incidences { offsets },
        bits,
        epsilon: eps,
        seed,
    })
}

/// Max-cut predictions: `b_i(e) = x*_i` with probability `1/2 + ε`, else `−x*_i`.
pub fn gen_maxcut_predictions(
    g: &Graph,
    truth: &GroundTruth,
    eps: f64,
    seed: u64,
) -> Result<PredictionTable> {
    check_epsilon(eps)?;
    let GroundTruth::Cut(x) = truth else {
        return domain("max-cut predictions need a Cut truth");
    };
    truth.check_graph(g)?;
    let mut ok = correctness_stream(seed, 2 * g.m(), eps);
    let mut bits = Vec::with_capacity(2 * g.m());
    for e in g.edges() {
        for v in e.endpoints() {
            bits.push(if ok.next().unwrap() { x[v] } else { -x[v] });
        }
    }
    Ok(PredictionTable {
        domain: BitDomain::Sign,
        layout: Layout::Edges,
        bits,
        epsilon: eps,
        seed,
    })
}

impl PredictionTable {
    /// Table from explicit bits, e.g. restored or hand-built.
    pub fn from_bits(
        domain: BitDomain,
        layout: Layout,
        bits: Vec<i8>,
        epsilon: f64,
        seed: u64,
    ) -> Result<Self> {
        check_epsilon(epsilon)?;
        let valid = |b: &i8| match domain {
            BitDomain::Binary => *b == 0 || *b == 1,
            BitDomain::Sign => *b == 1 || *b == -1,
        };
        if let Some(b) = bits.iter().find(|b| !valid(b)) {
            return domain_err(format!("bit {b} outside {domain:?}"));
        }
        match &layout {
            Layout::Edges if bits.len() % 2 != 0 => {
                return domain_err("edge layout needs two bits per edge");
            }
            Layout::Incidences { offsets }
                if offsets.first() != Some(&0)
                    || offsets.last() != Some(&bits.len())
                    || offsets.windows(2).any(|w| w[0] > w[1]) =>
            {
                return domain_err("incidence offsets do not match the bits");
            }
            _ => {}
        }
        Ok(Self {
            domain,
            layout,
            bits,
            epsilon,
            seed,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn domain(&self) -> BitDomain {
        self.domain
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn bits(&self) -> &[i8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn edge_bit(&self, edge: usize, slot: usize) -> i8 {
        self.bits[2 * edge + slot]
    }

    /// The bit edge `edge` reports about its endpoint `v`.
    #[inline]
    pub fn bit_about(&self, g: &Graph, edge: usize, v: VertexId) -> i8 {
        let slot = usize::from(g.edge(edge).u != v);
        self.edge_bit(edge, slot)
    }

    /// Bits reported about `v` by its incident edges.
    pub fn vertex_bits<'a>(&'a self, g: &'a Graph, v: VertexId) -> impl Iterator<Item = i8> + 'a {
        g.incident(v).iter().map(move |&(_, e)| self.bit_about(g, e, v))
    }

    /// Bits of set `j` (incidence layout only).
    pub fn set_bits(&self, j: usize) -> &[i8] {
        match &self.layout {
            Layout::Incidences { offsets } => &self.bits[offsets[j]..offsets[j + 1]],
            Layout::Edges => panic!("set_bits on an edge-layout table"),
        }
    }

    /// Checks that this table carries one `dom` bit per endpoint of every edge.
    pub fn check_edges(&self, g: &Graph, dom: BitDomain) -> Result<()> {
        if self.layout != Layout::Edges || self.domain != dom {
            return Err(Error::MissingPrediction(format!(
                "expected {dom:?} edge predictions, got {:?} {:?}",
                self.domain, self.layout
            )));
        }
        if self.bits.len() != 2 * g.m() {
            return Err(Error::MissingPrediction(format!(
                "{} bits for {} edges",
                self.bits.len(),
                g.m()
            )));
        }
        Ok(())
    }

    pub fn check_sets(&self, ss: &SetSystem) -> Result<()> {
        let ok = match &self.layout {
            Layout::Incidences { offsets } => {
                offsets.len() == ss.n() + 1
                    && ss
                        .sets()
                        .iter()
                        .enumerate()
                        .all(|(j, s)| offsets[j + 1] - offsets[j] == s.len())
            }
            Layout::Edges => false,
        };
        if ok && self.domain == BitDomain::Binary {
            Ok(())
        } else {
            Err(Error::MissingPrediction(
                "table does not match the set system's incidences".into(),
            ))
        }
    }

    /// Writes `edge_index,endpoint_slot,bit` rows (or `set_index,position,bit`
    /// for set systems) after a `#` line recording the table parameters.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let (dom, lay) = (
            match self.domain {
                BitDomain::Binary => "binary",
                BitDomain::Sign => "sign",
            },
            match self.layout {
                Layout::Edges => "edges",
                Layout::Incidences { .. } => "incidences",
            },
        );
        writeln!(
            out,
            "# epsilon={} seed={} domain={dom} layout={lay}",
            self.epsilon, self.seed
        )?;
        match &self.layout {
            Layout::Edges => {
                writeln!(out, "edge_index,endpoint_slot,bit")?;
                for (k, b) in self.bits.iter().enumerate() {
                    writeln!(out, "{},{},{b}", k / 2, k % 2)?;
                }
            }
            Layout::Incidences { offsets } => {
                writeln!(out, "set_index,position,bit")?;
                for j in 0..offsets.len() - 1 {
                    for (p, b) in self.bits[offsets[j]..offsets[j + 1]].iter().enumerate() {
                        writeln!(out, "{j},{p},{b}")?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Inverse of [`PredictionTable::write_csv`]. Rows must appear in the
    /// order they were written.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let perr = |line: usize, msg: &str| Error::Parse {
            line,
            msg: msg.to_string(),
        };
        let (_, meta) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
        let meta = meta?;
        let mut eps = None;
        let mut seed = None;
        let mut dom = None;
        let mut incid = None;
        for kv in meta.trim_start_matches('#').split_whitespace() {
            match kv.split_once('=') {
                Some(("epsilon", v)) => eps = v.parse::<f64>().ok(),
                Some(("seed", v)) => seed = v.parse::<u64>().ok(),
                Some(("domain", "binary")) => dom = Some(BitDomain::Binary),
                Some(("domain", "sign")) => dom = Some(BitDomain::Sign),
                Some(("layout", "edges")) => incid = Some(false),
                Some(("layout", "incidences")) => incid = Some(true),
                _ => return Err(perr(1, "unrecognized metadata")),
            }
        }
        let (Some(epsilon), Some(seed), Some(domain), Some(incid)) = (eps, seed, dom, incid)
        else {
            return Err(perr(1, "incomplete metadata"));
        };
        check_epsilon(epsilon)?;
        lines.next();
        let mut bits = Vec::new();
        let mut offsets = vec![0usize];
        for (i, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<i64> = line
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| perr(i + 1, "bad row")))
                .collect::<Result<_>>()?;
            if f.len() != 3 {
                return Err(perr(i + 1, "expected three fields"));
            }
            let b = f[2] as i8;
            let valid = match domain {
                BitDomain::Binary => b == 0 || b == 1,
                BitDomain::Sign => b == 1 || b == -1,
            };
            if !valid || f[2] != b as i64 {
                return Err(perr(i + 1, "bit outside domain"));
            }
            if incid {
                let j = f[0] as usize;
                while offsets.len() <= j + 1 {
                    offsets.push(bits.len());
                }
                if offsets.len() != j + 2 || f[1] as usize != bits.len() - offsets[j] {
                    return Err(perr(i + 1, "rows out of order"));
                }
            } else if f[0] as usize * 2 + f[1] as usize != bits.len() {
                return Err(perr(i + 1, "rows out of order"));
            }
            bits.push(b);
            if incid {
                *offsets.last_mut().unwrap() = bits.len();
            }
        }
        let layout = if incid {
            Layout::Incidences { offsets }
        } else {
            Layout::Edges
        };
        Ok(Self {
            domain,
            layout,
            bits,
            epsilon,
            seed,
        })
    }
}

/// 1 iff strictly more than half of the `{0,1}` bits are 1; ties give 0.
pub fn majority<I: IntoIterator<Item = i8>>(bits: I) -> Result<i8> {
    let (mut ones, mut total) = (0usize, 0usize);
    for b in bits {
        ones += (b == 1) as usize;
        total += 1;
    }
    if total == 0 {
        return domain("majority of an empty sequence");
    }
    Ok((2 * ones > total) as i8)
}

/// Majority vote per vertex over its incident bits; `None` for isolated vertices.
pub fn vertex_votes(g: &Graph, preds: &PredictionTable) -> Result<Vec<Option<i8>>> {
    preds.check_edges(g, BitDomain::Binary)?;
    Ok((0..g.n())
        .map(|v| majority(preds.vertex_bits(g, v)).ok())
        .collect())
}

/// `z_i = (1/deg i) Σ_{e ∋ i} b_i(e) / (2ε)`, an unbiased estimate of `x*_i`.
/// Isolated vertices get 0.
pub fn aggregate_z(g: &Graph, preds: &PredictionTable, eps: f64) -> Result<Vec<f64>> {
    check_epsilon(eps)?;
    preds.check_edges(g, BitDomain::Sign)?;
    Ok((0..g.n())
        .map(|i| {
            let d = g.deg(i);
            if d == 0 {
                return 0.0;
            }
            let s: i64 = preds.vertex_bits(g, i).map(i64::from).sum();
            s as f64 / (2.0 * eps * d as f64)
        })
        .collect())
}

/// Mixes a base seed with indices into an independent-looking 64-bit seed.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    parts
        .iter()
        .fold(splitmix(base), |acc, &p| splitmix(acc ^ splitmix(p)))
}
