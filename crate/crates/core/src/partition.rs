//! Cluster decompositions: set partitions of the subsystem indices and the
//! refinement lattice they form.
//!
//! Members are zero-based in the API. The text form (`1,2|3,4`) is one-based.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest `n` accepted by [`enumerate_partitions`].
pub const MAX_ENUMERATION: usize = 12;

/// A partition of `0..n` into nonempty disjoint clusters, stored in normal
/// form: members ascending, clusters ordered by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClusterDecomposition {
    n: usize,
    clusters: Vec<Vec<usize>>,
}

impl ClusterDecomposition {
    pub fn new(n: usize, clusters: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPartition("no subsystems".into()));
        }
        let mut seen = vec![false; n];
        let mut clusters = clusters;
        for cl in &mut clusters {
            if cl.is_empty() {
                return Err(Error::InvalidPartition("empty cluster".into()));
            }
            for &m in cl.iter() {
                if m >= n {
                    return Err(Error::InvalidPartition(format!(
                        "member {} exceeds {} subsystems",
                        m + 1,
                        n
                    )));
                }
                if seen[m] {
                    return Err(Error::InvalidPartition(format!("member {} repeated", m + 1)));
                }
                seen[m] = true;
            }
            cl.sort_unstable();
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidPartition(format!("member {} missing", missing + 1)));
        }
        clusters.sort_by_key(|cl| cl[0]);
        Ok(Self { n, clusters })
    }

    /// Builds from a cluster label per member (labels need not be contiguous).
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut clusters: Vec<(usize, Vec<usize>)> = Vec::new();
        for (m, &l) in labels.iter().enumerate() {
            match clusters.iter_mut().find(|(lab, _)| *lab == l) {
                Some((_, cl)) => cl.push(m),
                None => clusters.push((l, vec![m])),
            }
        }
        let mut clusters: Vec<Vec<usize>> = clusters.into_iter().map(|(_, c)| c).collect();
        clusters.sort_by_key(|cl| cl[0]);
        Self { n: labels.len(), clusters }
    }

    /// The single-cluster decomposition.
    pub fn trivial(n: usize) -> Self {
        Self { n, clusters: vec![(0..n).collect()] }
    }

    /// All singletons.
    pub fn maximal(n: usize) -> Self {
        Self { n, clusters: (0..n).map(|k| vec![k]).collect() }
    }

    /// `{cluster, complement}`; the complement must be nonempty.
    pub fn bipartition(n: usize, cluster: &[usize]) -> Result<Self> {
        let rest: Vec<usize> = (0..n).filter(|k| !cluster.contains(k)).collect();
        Self::new(n, vec![cluster.to_vec(), rest])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.clusters.len() == 1
    }

    pub fn is_maximal(&self) -> bool {
        self.clusters.len() == self.n
    }

    /// Cluster index of every member.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (k, cl) in self.clusters.iter().enumerate() {
            for &m in cl {
                labels[m] = k;
            }
        }
        labels
    }

    /// Merges clusters as directed by `grouping`, a partition of the cluster
    /// indices `0..self.len()`.
    pub fn coarsen(&self, grouping: &[Vec<usize>]) -> Result<Self> {
        let groups = ClusterDecomposition::new(self.len(), grouping.to_vec())
            .map_err(|e| Error::InvalidPartition(format!("grouping of clusters: {e}")))?;
        let merged = groups
            .clusters
            .iter()
            .map(|g| g.iter().flat_map(|&k| self.clusters[k].iter().copied()).collect())
            .collect();
        Self::new(self.n, merged)
    }

    /// True iff `self` is a coarsening of `finer`: every cluster of `self`
    /// is a union of clusters of `finer`.
    pub fn is_coarsening_of(&self, finer: &ClusterDecomposition) -> bool {
        is_coarsening(finer, self)
    }

    /// Coarsest common refinement: all nonempty pairwise intersections.
    pub fn intersect(&self, other: &ClusterDecomposition) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidPartition(format!(
                "partitions of {} and {} members",
                self.n, other.n
            )));
        }
        let (la, lb) = (self.labels(), other.labels());
        let joint: Vec<usize> = la.iter().zip(&lb).map(|(a, b)| a * other.len() + b).collect();
        Ok(Self::from_labels(&joint))
    }

    /// Restriction to a subset of members, relabeled `0..subset.len()` in
    /// ascending member order.
    pub fn induced(&self, subset: &[usize]) -> Result<Self> {
        let mut sub = subset.to_vec();
        sub.sort_unstable();
        sub.dedup();
        if sub.is_empty() || sub.iter().any(|&m| m >= self.n) {
            return Err(Error::InvalidPartition(format!("bad subset {subset:?}")));
        }
        let labels = self.labels();
        Ok(Self::from_labels(&sub.iter().map(|&m| labels[m]).collect::<Vec<_>>()))
    }

    /// Every coarsening of `self`, including itself.
    pub fn coarsenings(&self) -> Result<Vec<ClusterDecomposition>> {
        enumerate_partitions(self.len())?
            .map(|g| self.coarsen(g.clusters()))
            .collect()
    }
}

/// True iff `coarse` is a coarsening of `fine`.
pub fn is_coarsening(fine: &ClusterDecomposition, coarse: &ClusterDecomposition) -> bool {
    if fine.n != coarse.n {
        return false;
    }
    let coarse_labels = coarse.labels();
    fine.clusters
        .iter()
        .all(|cl| cl.iter().all(|&m| coarse_labels[m] == coarse_labels[cl[0]]))
}

impl fmt::Display for ClusterDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self
            .clusters
            .iter()
            .map(|cl| cl.iter().map(|m| (m + 1).to_string()).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&text.join("|"))
    }
}

/// Parses a one-based list of members such as `2,3`.
pub fn parse_index_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            match tok.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(Error::InvalidPartition(format!("bad member `{tok}`"))),
            }
        })
        .collect()
}

/// Parses `1,2|3,4` keeping the cluster order as written.
pub fn parse_groups(text: &str) -> Result<Vec<Vec<usize>>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::InvalidPartition("empty partition".into()));
    }
    text.split('|').map(parse_index_list).collect()
}

impl FromStr for ClusterDecomposition {
    type Err = Error;

    /// `n` is inferred as the largest member; missing members are an error.
    fn from_str(s: &str) -> Result<Self> {
        let groups = parse_groups(s)?;
        let n = groups.iter().flatten().map(|m| m + 1).max().unwrap_or(0);
        Self::new(n, groups)
    }
}

/// Iterator over all partitions of `0..n` via restricted growth strings.
pub struct Partitions {
    rgs: Vec<usize>,
    maxes: Vec<usize>,
    done: bool,
}

impl Iterator for Partitions {
    type Item = ClusterDecomposition;

    fn next(&mut self) -> Option<ClusterDecomposition> {
        if self.done {
            return None;
        }
        let out = ClusterDecomposition::from_labels(&self.rgs);
        // advance: rightmost position that can still grow
        let n = self.rgs.len();
        let mut k = n;
        while k > 1 {
            k -= 1;
            if self.rgs[k] <= self.maxes[k - 1] {
                self.rgs[k] += 1;
                let m = self.maxes[k - 1].max(self.rgs[k]);
                self.maxes[k] = m;
                for j in k + 1..n {
                    self.rgs[j] = 0;
                    self.maxes[j] = m;
                }
                return Some(out);
            }
        }
        self.done = true;
        Some(out)
    }
}

/// Every partition of `0..n` exactly once (Bell-number many), `1 <= n <= 12`.
pub fn enumerate_partitions(n: usize) -> Result<Partitions> {
    if n == 0 || n > MAX_ENUMERATION {
        return Err(Error::OutOfRange(format!(
            "partition enumeration needs 1 <= n <= {MAX_ENUMERATION}, got {n}"
        )));
    }
    Ok(Partitions { rgs: vec![0; n], maxes: vec![0; n], done: false })
}

/// Subsets `S` of `members` defining the bipartitions `{S, members \ S}`,
/// ordered by `|S|` ascending then lexicographically, each unordered split
/// listed once. `members` must have at least two elements.
pub fn bipartition_candidates(members: &[usize]) -> Vec<Vec<usize>> {
    let k = members.len();
    let mut out = Vec::new();
    for size in 1..=k / 2 {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            // for the balanced split keep only the half containing the first member
            if !(2 * size == k && idx[0] != 0) {
                out.push(idx.iter().map(|&i| members[i]).collect());
            }
            // next combination
            let mut i = size;
            let mut advanced = false;
            while i > 0 {
                i -= 1;
                if idx[i] < k - size + i {
                    idx[i] += 1;
                    for j in i + 1..size {
                        idx[j] = idx[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    out
}
