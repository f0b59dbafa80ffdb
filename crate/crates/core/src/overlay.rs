//! Unstructured P2P overlay graph and Gnutella-style query flooding.
//!
//! The overlay is an undirected graph of servants (peers that act both as
//! clients and servers). Queries propagate by TTL-bounded flooding with
//! duplicate suppression, so each peer handles a given message at most once
//! and the cost of one flood is linear in the edge count.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Index of a peer, dense in `[0, n)` for the topology it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PeerId(pub usize);

impl fmt::Display for PeerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A query message as it floods through the overlay.
#[derive(Debug, Clone)]
pub struct QueryMessage {
    /// Unique id; duplicate suppression keys on this.
    pub message_id: u64,
    pub origin: PeerId,
    /// Exact filename being searched for.
    pub keyword: String,
    /// Remaining hop budget; never increases while the message propagates.
    pub ttl_remaining: u32,
}

/// One positive answer to a query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryHit {
    pub responder: PeerId,
    pub filename: String,
    /// Hops from the query origin to the responder; at most the initial TTL.
    pub hop_distance: u32,
    /// True when fabricated by a query-spoofing virus rather than backed by
    /// a real shared file.
    pub spoofed: bool,
}

/// Undirected overlay graph with per-peer sorted adjacency lists.
///
/// Immutable after construction; safe to share read-only across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    n: usize,
    adjacency: Vec<Vec<PeerId>>,
    seed: u64,
}

impl Topology {
    /// Number of peers.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Sorted neighbors of `peer`.
    pub fn neighbors(&self, peer: PeerId) -> &[PeerId] {
        &self.adjacency[peer.0]
    }

    /// RNG seed the topology was built from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Total number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Mean peer degree.
    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edge_count() as f64 / self.n as f64
    }

    /// Edge set as (i, j) pairs with i < j, ascending.
    pub fn edges(&self) -> Vec<(PeerId, PeerId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, neigh) in self.adjacency.iter().enumerate() {
            for &j in neigh {
                if i < j.0 {
                    out.push((PeerId(i), j));
                }
            }
        }
        out
    }

    /// Writes the edge list as `i j` lines (i < j), for debugging.
    pub fn write_edge_list(&self, w: &mut dyn Write) -> Result<()> {
        for (i, j) in self.edges() {
            writeln!(w, "{} {}", i, j)?;
        }
        Ok(())
    }

    fn validate_peer(&self, peer: PeerId) -> Result<()> {
        if peer.0 >= self.n {
            return Err(Error::config(format!(
                "peer {} out of range for topology of {} peers",
                peer, self.n
            )));
        }
        Ok(())
    }
}

/// Builds a connected overlay: ring backbone 0-1-…-(n-1)-0 plus random
/// chords until the target mean degree is reached.
///
/// Deterministic for fixed `(n, avg_degree, seed)`. The ring guarantees
/// connectivity, so no peer is ever isolated from the flood.
pub fn build_overlay(n: usize, avg_degree: f64, seed: u64) -> Result<Topology> {
    if n < 2 {
        return Err(Error::config(format!("need at least 2 peers, got {n}")));
    }
    if !avg_degree.is_finite() || avg_degree < 2.0 {
        return Err(Error::config(format!(
            "target mean degree must be >= 2, got {avg_degree}"
        )));
    }
    // A simple graph on n peers cannot exceed mean degree n-1. The 2-peer
    // ring collapses to a single edge, so avg_degree 2 stays legal there.
    let max_degree = if n == 2 { 2.0 } else { (n - 1) as f64 };
    if avg_degree > max_degree {
        return Err(Error::config(format!(
            "target mean degree {avg_degree} unreachable with {n} peers"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    for i in 0..n {
        let j = (i + 1) % n;
        edges.insert((i.min(j), i.max(j)));
    }

    let max_edges = n * (n - 1) / 2;
    let target_edges = ((n as f64 * avg_degree / 2.0).ceil() as usize)
        .clamp(edges.len(), max_edges);

    // Rejection-sample chords; near a complete graph most draws collide with
    // existing edges, so fall back to enumerating the missing pairs.
    let mut misses = 0usize;
    while edges.len() < target_edges && misses < 64 {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        if edges.insert((a.min(b), a.max(b))) {
            misses = 0;
        } else {
            misses += 1;
        }
    }
    if edges.len() < target_edges {
        let mut missing: Vec<(usize, usize)> = Vec::with_capacity(max_edges - edges.len());
        for i in 0..n {
            for j in (i + 1)..n {
                if !edges.contains(&(i, j)) {
                    missing.push((i, j));
                }
            }
        }
        missing.shuffle(&mut rng);
        for pair in missing.into_iter().take(target_edges - edges.len()) {
            edges.insert(pair);
        }
    }

    let mut adjacency = vec![Vec::new(); n];
    for &(i, j) in &edges {
        adjacency[i].push(PeerId(j));
        adjacency[j].push(PeerId(i));
    }
    for neigh in &mut adjacency {
        neigh.sort_unstable();
    }

    Ok(Topology { n, adjacency, seed })
}

/// Peers reachable by a TTL-bounded flood from `origin`, each with its
/// minimal hop distance. The origin itself is excluded.
///
/// Implemented as the message walk a real flood performs: every peer
/// forwards the message to its neighbors while the hop budget lasts, and
/// duplicate suppression drops copies of an already-seen message id.
pub fn flood_reach(
    topology: &Topology,
    origin: PeerId,
    ttl: u32,
) -> Result<BTreeMap<PeerId, u32>> {
    topology.validate_peer(origin)?;

    let mut seen = vec![false; topology.len()];
    seen[origin.0] = true;
    let mut reached = BTreeMap::new();
    let mut frontier = VecDeque::new();
    frontier.push_back((origin, ttl));

    while let Some((holder, budget)) = frontier.pop_front() {
        if budget == 0 {
            continue;
        }
        for &next in topology.neighbors(holder) {
            if seen[next.0] {
                continue; // duplicate suppression
            }
            seen[next.0] = true;
            reached.insert(next, ttl - (budget - 1));
            frontier.push_back((next, budget - 1));
        }
    }
    Ok(reached)
}

/// Flood driven by an explicit [`QueryMessage`].
pub fn flood(topology: &Topology, message: &QueryMessage) -> Result<BTreeMap<PeerId, u32>> {
    flood_reach(topology, message.origin, message.ttl_remaining)
}
