//! The Dicke ladder: system size, decay rate, ladder factors and the pole
//! structure of index windows.
//!
//! Collective decay of `N` identical two-level emitters stays inside the
//! permutation-symmetric subspace spanned by Dicke states |m⟩ with
//! m = 0..N excitations. The transition |m⟩ → |m−1⟩ carries the rate weight
//! h_m = m(N+1−m), which is also an eigenvalue of the diagonal Lindblad
//! action. The spectrum is symmetric about the equator, h_m = h_{N+1−m},
//! so most values come in degenerate pairs; the pairing is broken at the
//! central index (N+1)/2 when N is odd.

use crate::error::{Error, Result};

/// An `N`-emitter system with collective decay rate Γ.
///
/// Immutable after construction; all methods are pure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderModel {
    n: u32,
    gamma: f64,
}

impl LadderModel {
    /// Creates a model, validating `n >= 1` and `gamma > 0`.
    pub fn new(n: u32, gamma: f64) -> Result<Self> {
        if n < 1 || !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidModel { n, gamma });
        }
        Ok(LadderModel { n, gamma })
    }

    /// Number of emitters.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Collective decay rate Γ (units 1/time).
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Ladder factor h_m = m(N+1−m) for 0 ≤ m ≤ N, computed exactly.
    ///
    /// h_0 = 0 (the ground state does not decay); h_m > 0 for 1 ≤ m ≤ N.
    pub fn ladder_factor(&self, m: u32) -> Result<u64> {
        if m > self.n {
            return Err(Error::IndexOutOfRange {
                m,
                lo: 0,
                hi: self.n,
            });
        }
        Ok(self.h(m))
    }

    /// h_m without the range check; callers guarantee m ≤ N.
    pub(crate) fn h(&self, m: u32) -> u64 {
        let m = m as u64;
        m * (self.n as u64 + 1 - m)
    }

    /// The degeneracy partner m̄ = N+1−m, satisfying h_{m̄} = h_m.
    ///
    /// For odd N the central index (N+1)/2 is its own partner.
    pub fn partner(&self, m: u32) -> Result<u32> {
        if m < 1 || m > self.n {
            return Err(Error::IndexOutOfRange {
                m,
                lo: 1,
                hi: self.n,
            });
        }
        Ok(self.n + 1 - m)
    }

    /// Groups the indices of `[m_low, m_high]` by equal ladder factor.
    ///
    /// An entry gets multiplicity 2 exactly when both members of a partner
    /// pair (k, N+1−k) lie inside the window; multiplicity never exceeds 2.
    pub fn pole_spectrum(&self, m_low: u32, m_high: u32) -> Result<PoleSet> {
        if m_low < 1 || m_high > self.n || m_low > m_high {
            return Err(Error::InvalidWindow {
                lo: m_low,
                hi: m_high,
            });
        }
        let mut entries: Vec<PoleEntry> = Vec::with_capacity((m_high - m_low + 1) as usize);
        for k in m_low..=m_high {
            let partner = self.n + 1 - k;
            if partner > k && partner <= m_high {
                // The pair member with the larger index registers the pole.
                continue;
            }
            let mut indices = Vec::with_capacity(2);
            if partner < k && partner >= m_low {
                indices.push(partner);
            }
            indices.push(k);
            entries.push(PoleEntry {
                value: self.h(k),
                indices,
            });
        }
        entries.sort_by_key(|e| e.value);
        Ok(PoleSet { entries })
    }
}

/// One distinct pole value of a window, with the ladder indices carrying it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleEntry {
    /// The ladder factor h shared by `indices`.
    pub value: u64,
    /// Ascending indices k of the window with h_k = `value`; length 1 or 2.
    pub indices: Vec<u32>,
}

impl PoleEntry {
    /// Pole multiplicity: the number of window indices sharing the value.
    pub fn multiplicity(&self) -> usize {
        self.indices.len()
    }
}

/// The distinct pole values of an index window, ascending by value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleSet {
    entries: Vec<PoleEntry>,
}

impl PoleSet {
    /// Entries in ascending pole-value order.
    pub fn entries(&self) -> &[PoleEntry] {
        &self.entries
    }

    /// Looks up the entry for a given pole value.
    pub fn get(&self, value: u64) -> Option<&PoleEntry> {
        self.entries
            .binary_search_by_key(&value, |e| e.value)
            .ok()
            .map(|i| &self.entries[i])
    }

    /// Number of distinct pole values.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True when the window was empty (cannot happen for validated windows).
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
