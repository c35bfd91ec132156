//! Minimum-storage code for six nodes in two clusters of three, `k = 4`.
//!
//! The file is eight symbols `x_1..x_4, y_1..y_4`.  Two systematic (6, 4) MDS
//! codes `[I | g h]` and `[I | g' h']` encode the `x` and `y` halves; node `i`
//! stores `(x_i, y_i)`, so `α = 2`.  A failed node downloads both symbols from
//! each of the two other nodes in its cluster (`β_I = 2`) and one combined
//! symbol `λ_j x_j + λ'_j y_j` from each of the three nodes in the other
//! cluster (`β_C = 1`).  The cross coefficients are chosen so the contribution
//! of the one unknown systematic pair not downloaded collapses to rank one
//! and can be cancelled, leaving a solvable 2×2 system for the lost pair.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::gf256::{self, Gf256};

/// Number of storage nodes.
pub const NODES: usize = 6;
/// Systematic symbols per half of the file.
pub const DATA: usize = 4;
/// Symbols transferred by one repair: `2·β_I + 3·β_C`.
pub const REPAIR_SYMBOLS: usize = 7;

/// Parity columns of both generators and the cluster layout (1-indexed nodes).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub g: [Gf256; DATA],
    pub h: [Gf256; DATA],
    pub g_prime: [Gf256; DATA],
    pub h_prime: [Gf256; DATA],
    #[serde(default = "default_clusters")]
    pub clusters: [[usize; 3]; 2],
}

fn default_clusters() -> [[usize; 3]; 2] {
    [[1, 2, 3], [4, 5, 6]]
}

impl CodeSpec {
    /// Code with the default layout `{1,2,3}`, `{4,5,6}`.
    pub fn new(g: [Gf256; DATA], h: [Gf256; DATA], g_prime: [Gf256; DATA], h_prime: [Gf256; DATA]) -> Self {
        Self { g, h, g_prime, h_prime, clusters: default_clusters() }
    }

    /// Coding vector of node `node` (1-indexed) in the `x` code.
    pub fn x_column(&self, node: usize) -> [Gf256; DATA] {
        column(node, &self.g, &self.h)
    }

    /// Coding vector of node `node` (1-indexed) in the `y` code.
    pub fn y_column(&self, node: usize) -> [Gf256; DATA] {
        column(node, &self.g_prime, &self.h_prime)
    }

    /// Every 4-subset of the six columns is invertible, for both codes.
    pub fn is_mds(&self) -> bool {
        four_subsets().all(|set| {
            let xs: Vec<Vec<Gf256>> = set.iter().map(|&j| self.x_column(j).to_vec()).collect();
            let ys: Vec<Vec<Gf256>> = set.iter().map(|&j| self.y_column(j).to_vec()).collect();
            !gf256::determinant(xs).is_zero() && !gf256::determinant(ys).is_zero()
        })
    }

    fn check_layout(&self) -> Result<(), Error> {
        let mut all: Vec<usize> = self.clusters.iter().flatten().copied().collect();
        all.sort_unstable();
        if all != (1..=NODES).collect::<Vec<_>>() {
            return Err(Error::CodeConstruction(format!(
                "clusters {:?} do not partition nodes 1..=6",
                self.clusters
            )));
        }
        Ok(())
    }

    fn cluster_of(&self, node: usize) -> usize {
        if self.clusters[0].contains(&node) {
            0
        } else {
            1
        }
    }
}

fn column(node: usize, first: &[Gf256; DATA], second: &[Gf256; DATA]) -> [Gf256; DATA] {
    match node {
        1..=4 => {
            let mut e = [Gf256::ZERO; DATA];
            e[node - 1] = Gf256::ONE;
            e
        }
        5 => *first,
        6 => *second,
        _ => panic!("node index {node} outside 1..=6"),
    }
}

/// The 15 four-element subsets of `1..=6`, lexicographically.
pub fn four_subsets() -> impl Iterator<Item = [usize; 4]> {
    (1..=NODES).flat_map(|a| {
        (a + 1..=NODES).flat_map(move |b| {
            (b + 1..=NODES).flat_map(move |c| (c + 1..=NODES).map(move |d| [a, b, c, d]))
        })
    })
}

/// Two symbols stored by one node.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeContent {
    pub x: Gf256,
    pub y: Gf256,
}

/// Cauchy parity block `r_i · c_j / (u_i + v_j)` with distinct points.
fn cauchy_columns(rng: &mut ChaCha8Rng) -> ([Gf256; DATA], [Gf256; DATA]) {
    let mut points: Vec<Gf256> = Vec::with_capacity(DATA + 2);
    while points.len() < DATA + 2 {
        let p = Gf256(rng.gen());
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let nonzero = |rng: &mut ChaCha8Rng| Gf256(rng.gen_range(1..=255));
    let rows: Vec<Gf256> = (0..DATA).map(|_| nonzero(rng)).collect();
    let cols = [nonzero(rng), nonzero(rng)];
    let mut out = [[Gf256::ZERO; DATA]; 2];
    for (j, col) in out.iter_mut().enumerate() {
        for i in 0..DATA {
            col[i] = rows[i] * cols[j] / (points[i] + points[DATA + j]);
        }
    }
    (out[0], out[1])
}

/// Attempts before [`make_code`] gives up.
const MAX_ATTEMPTS: usize = 256;

/// Deterministic MDS code for `seed` that also admits an alignment plan for
/// every single-node failure.
pub fn make_code(seed: u64) -> Result<CodeSpec, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let (g, h) = cauchy_columns(&mut rng);
        let (g_prime, h_prime) = cauchy_columns(&mut rng);
        let code = CodeSpec::new(g, h, g_prime, h_prime);
        if code.is_mds() && (1..=NODES).all(|f| plan_repair(f, &code).is_ok()) {
            return Ok(code);
        }
    }
    Err(Error::CodeConstruction(format!("no repairable MDS code found in {MAX_ATTEMPTS} attempts")))
}

/// Systematic encoding of `x_1..x_4, y_1..y_4`.
pub fn encode(file: &[Gf256; 2 * DATA], code: &CodeSpec) -> [NodeContent; NODES] {
    let (xs, ys) = file.split_at(DATA);
    let mut out = [NodeContent::default(); NODES];
    for (i, node) in out.iter_mut().enumerate() {
        node.x = gf256::dot(&code.x_column(i + 1), xs);
        node.y = gf256::dot(&code.y_column(i + 1), ys);
    }
    out
}

/// Recover the file from any four distinct nodes (1-indexed).
pub fn reconstruct(nodes: &[(usize, NodeContent)], code: &CodeSpec) -> Result<[Gf256; 2 * DATA], Error> {
    if nodes.len() != DATA {
        return Err(Error::Repair(format!("reconstruction needs {DATA} nodes, got {}", nodes.len())));
    }
    let mut ids: Vec<usize> = nodes.iter().map(|(i, _)| *i).collect();
    ids.sort_unstable();
    ids.dedup();
    if ids.len() != DATA || ids.iter().any(|&i| !(1..=NODES).contains(&i)) {
        return Err(Error::Repair(format!("node indices {ids:?} must be four distinct values in 1..=6")));
    }
    let xa: Vec<Vec<Gf256>> = nodes.iter().map(|(i, _)| code.x_column(*i).to_vec()).collect();
    let ya: Vec<Vec<Gf256>> = nodes.iter().map(|(i, _)| code.y_column(*i).to_vec()).collect();
    let xb: Vec<Gf256> = nodes.iter().map(|(_, c)| c.x).collect();
    let yb: Vec<Gf256> = nodes.iter().map(|(_, c)| c.y).collect();
    let xs = gf256::solve(xa, xb).ok_or_else(|| Error::Repair("x-code system is singular".into()))?;
    let ys = gf256::solve(ya, yb).ok_or_else(|| Error::Repair("y-code system is singular".into()))?;
    let mut out = [Gf256::ZERO; 2 * DATA];
    out[..DATA].copy_from_slice(&xs);
    out[DATA..].copy_from_slice(&ys);
    Ok(out)
}

/// One combined symbol `lambda·x_j + lambda_prime·y_j` requested from node `node`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossDownload {
    pub node: usize,
    pub lambda: Gf256,
    pub lambda_prime: Gf256,
}

/// How to repair one failed node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairPlan {
    pub failed: usize,
    /// Same-cluster nodes sending both stored symbols.
    pub intra_sources: [usize; 2],
    pub cross: [CrossDownload; 3],
    /// Row combinations of the three cross residuals that cancel the
    /// interference.
    pub combine: [[Gf256; 3]; 2],
}

/// Coefficients of a node's coding vector in the basis
/// `{intra_a, intra_b, failed, interferer}`.
#[derive(Debug, Clone, Copy)]
struct Decomposition {
    known: [Gf256; 2],
    target: Gf256,
    interference: Gf256,
}

fn decompose(column: [Gf256; DATA], basis: &[[Gf256; DATA]; 4]) -> Option<Decomposition> {
    // Solve Σ c_t basis_t = column: the matrix has the basis vectors as columns.
    let a: Vec<Vec<Gf256>> = (0..DATA).map(|row| basis.iter().map(|b| b[row]).collect()).collect();
    let c = gf256::solve(a, column.to_vec())?;
    Some(Decomposition { known: [c[0], c[1]], target: c[2], interference: c[3] })
}

/// Basis decompositions of the three cross nodes for both codes.
struct RepairGeometry {
    intra: [usize; 2],
    cross: [usize; 3],
    x: [Decomposition; 3],
    y: [Decomposition; 3],
}

fn geometry(failed: usize, code: &CodeSpec) -> Result<RepairGeometry, Error> {
    if !(1..=NODES).contains(&failed) {
        return Err(Error::Repair(format!("failed node {failed} outside 1..=6")));
    }
    code.check_layout()?;
    let own = code.cluster_of(failed);
    let mut intra = [0usize; 2];
    for (slot, &n) in intra.iter_mut().zip(code.clusters[own].iter().filter(|&&n| n != failed)) {
        *slot = n;
    }
    let cross = code.clusters[1 - own];
    // The first cross node doubles as the interference direction.
    let interferer = cross[0];
    let basis_of = |col: &dyn Fn(usize) -> [Gf256; DATA]| [col(intra[0]), col(intra[1]), col(failed), col(interferer)];
    let xb = basis_of(&|j| code.x_column(j));
    let yb = basis_of(&|j| code.y_column(j));
    let singular = || Error::CodeConstruction("code is not MDS: repair basis is singular".into());
    let mut x = [Decomposition { known: [Gf256::ZERO; 2], target: Gf256::ZERO, interference: Gf256::ZERO }; 3];
    let mut y = x;
    for (t, &j) in cross.iter().enumerate() {
        x[t] = decompose(code.x_column(j), &xb).ok_or_else(singular)?;
        y[t] = decompose(code.y_column(j), &yb).ok_or_else(singular)?;
    }
    Ok(RepairGeometry { intra, cross, x, y })
}

impl RepairGeometry {
    fn interference(&self, coeffs: &[(Gf256, Gf256); 3]) -> [[Gf256; 2]; 3] {
        std::array::from_fn(|t| [coeffs[t].0 * self.x[t].interference, coeffs[t].1 * self.y[t].interference])
    }

    fn target(&self, coeffs: &[(Gf256, Gf256); 3]) -> [[Gf256; 2]; 3] {
        std::array::from_fn(|t| [coeffs[t].0 * self.x[t].target, coeffs[t].1 * self.y[t].target])
    }
}

/// Basis of `{u : u · m = 0}` for a 3×2 matrix `m`.
fn left_null_space(m: &[[Gf256; 2]; 3]) -> Vec<[Gf256; 3]> {
    // Row-reduce mᵀ (2×3) and read off the free variables.
    let mut rows: Vec<[Gf256; 3]> = (0..2).map(|c| [m[0][c], m[1][c], m[2][c]]).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..3 {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        for c in 0..3 {
            rows[r][c] *= inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col];
                for c in 0..3 {
                    let v = rows[r][c];
                    rows[i][c] += f * v;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    (0..3)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut u = [Gf256::ZERO; 3];
            u[free] = Gf256::ONE;
            for (row, &pc) in pivots.iter().enumerate() {
                u[pc] = rows[row][free];
            }
            u
        })
        .collect()
}

fn combined(u: &[[Gf256; 3]; 2], m: &[[Gf256; 2]; 3]) -> [[Gf256; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|c| (0..3).map(|t| u[i][t] * m[t][c]).sum()))
}

fn det2(m: &[[Gf256; 2]; 2]) -> Gf256 {
    m[0][0] * m[1][1] + m[0][1] * m[1][0]
}

/// Normalised coefficient pairs in search order: `(1,0), (1,1), …, (1,255), (0,1)`.
fn coefficient_pairs() -> impl Iterator<Item = (Gf256, Gf256)> {
    Gf256::all().map(|t| (Gf256::ONE, t)).chain(std::iter::once((Gf256::ZERO, Gf256::ONE)))
}

/// Deterministic search for cross coefficients that align the interference.
///
/// Alignment directions are scanned in the order of [`coefficient_pairs`];
/// for each cross node the first coefficient pair whose interference row is
/// parallel to the direction is taken, and the plan is accepted once the
/// interference-free combination of the residuals determines the lost pair.
pub fn plan_repair(failed: usize, code: &CodeSpec) -> Result<RepairPlan, Error> {
    let geo = geometry(failed, code)?;
    for direction in coefficient_pairs() {
        let mut coeffs = [(Gf256::ZERO, Gf256::ZERO); 3];
        let mut aligned = true;
        for (t, slot) in coeffs.iter_mut().enumerate() {
            let (qx, qy) = (geo.x[t].interference, geo.y[t].interference);
            let found = coefficient_pairs().find(|&(l, lp)| (l * qx) * direction.1 + (lp * qy) * direction.0 == Gf256::ZERO);
            match found {
                Some(pair) => *slot = pair,
                None => {
                    aligned = false;
                    break;
                }
            }
        }
        if !aligned {
            continue;
        }
        let interference = geo.interference(&coeffs);
        let target = geo.target(&coeffs);
        let null = left_null_space(&interference);
        for i in 0..null.len() {
            for j in i + 1..null.len() {
                let u = [null[i], null[j]];
                if !det2(&combined(&u, &target)).is_zero() {
                    let cross = std::array::from_fn(|t| CrossDownload {
                        node: geo.cross[t],
                        lambda: coeffs[t].0,
                        lambda_prime: coeffs[t].1,
                    });
                    return Ok(RepairPlan { failed, intra_sources: geo.intra, cross, combine: u });
                }
            }
        }
    }
    Err(Error::NoAlignment { failed })
}

/// Interference and reduced target matrices of a plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentMatrices {
    /// Row `t`: coefficients of the interfering pair in cross symbol `t`.
    pub interference: [[Gf256; 2]; 3],
    /// Coefficients of the lost pair after applying `combine`.
    pub target: [[Gf256; 2]; 2],
    /// `combine · interference`, zero for a sound plan.
    pub residual_interference: [[Gf256; 2]; 2],
}

impl AlignmentMatrices {
    pub fn interference_rank(&self) -> usize {
        gf256::rank(self.interference.iter().map(|r| r.to_vec()).collect())
    }

    pub fn target_determinant(&self) -> Gf256 {
        det2(&self.target)
    }

    /// Interference has rank one and the lost pair is solvable.
    pub fn is_sound(&self) -> bool {
        self.interference_rank() == 1
            && self.residual_interference.iter().flatten().all(|v| v.is_zero())
            && !self.target_determinant().is_zero()
    }
}

impl RepairPlan {
    /// Matrices the plan induces for `code`.
    pub fn alignment(&self, code: &CodeSpec) -> Result<AlignmentMatrices, Error> {
        let geo = self.geometry_for(code)?;
        let coeffs = self.coefficients();
        let interference = geo.interference(&coeffs);
        Ok(AlignmentMatrices {
            interference,
            target: combined(&self.combine, &geo.target(&coeffs)),
            residual_interference: combined(&self.combine, &interference),
        })
    }

    fn coefficients(&self) -> [(Gf256, Gf256); 3] {
        std::array::from_fn(|t| (self.cross[t].lambda, self.cross[t].lambda_prime))
    }

    fn geometry_for(&self, code: &CodeSpec) -> Result<RepairGeometry, Error> {
        let geo = geometry(self.failed, code)?;
        if geo.intra != self.intra_sources || (0..3).any(|t| geo.cross[t] != self.cross[t].node) {
            return Err(Error::Repair("plan helpers do not match the code's cluster layout".into()));
        }
        Ok(geo)
    }

    /// 1-indexed helper nodes in download order.
    pub fn helpers(&self) -> impl Iterator<Item = usize> + '_ {
        self.intra_sources.iter().copied().chain(self.cross.iter().map(|c| c.node))
    }
}

/// One transferred field symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transfer {
    pub from: usize,
    pub symbol: Gf256,
}

/// Everything the newcomer received, in order: `x, y` from each intra
/// source, then one symbol from each cross node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairTranscript {
    pub failed: usize,
    pub transfers: Vec<Transfer>,
}

impl RepairTranscript {
    pub fn symbol_count(&self) -> usize {
        self.transfers.len()
    }
}

/// Collect the helper symbols a plan asks for.  `alive` holds `(node, content)`.
pub fn download(plan: &RepairPlan, alive: &[(usize, NodeContent)]) -> Result<RepairTranscript, Error> {
    let content = |node: usize| {
        alive
            .iter()
            .find(|(i, _)| *i == node)
            .map(|(_, c)| *c)
            .ok_or_else(|| Error::Repair(format!("helper node {node} is not available")))
    };
    if alive.iter().any(|(i, _)| *i == plan.failed) {
        return Err(Error::Repair(format!("node {} is listed as alive", plan.failed)));
    }
    let mut transfers = Vec::with_capacity(REPAIR_SYMBOLS);
    for &src in &plan.intra_sources {
        let c = content(src)?;
        transfers.push(Transfer { from: src, symbol: c.x });
        transfers.push(Transfer { from: src, symbol: c.y });
    }
    for cd in &plan.cross {
        let c = content(cd.node)?;
        transfers.push(Transfer { from: cd.node, symbol: cd.lambda * c.x + cd.lambda_prime * c.y });
    }
    Ok(RepairTranscript { failed: plan.failed, transfers })
}

/// Rebuild the lost content from a transcript alone.
pub fn repair_from_transcript(
    plan: &RepairPlan,
    transcript: &RepairTranscript,
    code: &CodeSpec,
) -> Result<NodeContent, Error> {
    let geo = plan.geometry_for(code)?;
    let expected: Vec<usize> = plan
        .intra_sources
        .iter()
        .flat_map(|&s| [s, s])
        .chain(plan.cross.iter().map(|c| c.node))
        .collect();
    let senders: Vec<usize> = transcript.transfers.iter().map(|t| t.from).collect();
    if transcript.failed != plan.failed || senders != expected {
        return Err(Error::Repair(format!("transcript senders {senders:?} do not match plan {expected:?}")));
    }
    let sym = |i: usize| transcript.transfers[i].symbol;
    let known_x = [sym(0), sym(2)];
    let known_y = [sym(1), sym(3)];
    let coeffs = plan.coefficients();

    let residual: [Gf256; 3] = std::array::from_fn(|t| {
        let (l, lp) = coeffs[t];
        let known = l * (geo.x[t].known[0] * known_x[0] + geo.x[t].known[1] * known_x[1])
            + lp * (geo.y[t].known[0] * known_y[0] + geo.y[t].known[1] * known_y[1]);
        sym(4 + t) - known
    });
    let interference = geo.interference(&coeffs);
    let leak = combined(&plan.combine, &interference);
    if leak.iter().flatten().any(|v| !v.is_zero()) {
        return Err(Error::Repair("plan does not cancel the interference for this code".into()));
    }
    let target = combined(&plan.combine, &geo.target(&coeffs));
    let rhs: Vec<Gf256> = (0..2).map(|i| (0..3).map(|t| plan.combine[i][t] * residual[t]).sum()).collect();
    let lost = gf256::solve(target.iter().map(|r| r.to_vec()).collect(), rhs)
        .ok_or_else(|| Error::Repair("lost pair is not determined by the plan".into()))?;
    Ok(NodeContent { x: lost[0], y: lost[1] })
}

/// Download from `alive` and rebuild node `plan.failed`.
pub fn repair(
    plan: &RepairPlan,
    alive: &[(usize, NodeContent)],
    code: &CodeSpec,
) -> Result<(NodeContent, RepairTranscript), Error> {
    let transcript = download(plan, alive)?;
    let content = repair_from_transcript(plan, &transcript, code)?;
    Ok((content, transcript))
}
