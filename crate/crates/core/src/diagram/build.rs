use super::{Diagram, DiagramError};
use crate::syntax::{Basis, Phase};

/// A diagram of swaps sending input wire `i` to output position `perm[i]`.
pub fn permutation(perm: &[usize]) -> Result<Diagram, DiagramError> {
    let k = perm.len();
    let mut seen = vec![false; k];
    for &p in perm {
        if p >= k || seen[p] {
            return Err(DiagramError::NotPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    // Odd-even transposition sort on target positions; each round is a layer.
    let mut at: Vec<usize> = perm.to_vec();
    let mut layers = Vec::new();
    let mut round = 0;
    while at.windows(2).any(|w| w[0] > w[1]) {
        let mut parts = Vec::new();
        let mut p = 0;
        if round % 2 == 1 {
            parts.push(Diagram::Id(1));
            p = 1;
        }
        while p < k {
            if p + 1 < k && at[p] > at[p + 1] {
                at.swap(p, p + 1);
                parts.push(Diagram::Swap);
            } else {
                parts.push(Diagram::Id((k - p).min(2)));
            }
            p += 2;
        }
        layers.push(Diagram::par_all(parts));
        round += 1;
    }
    if layers.is_empty() {
        return Ok(Diagram::Id(k));
    }
    Ok(Diagram::seq_all(layers))
}

/// `n` copies of `wires` wires in basis `basis`, laid out copy-major.
pub fn upsilon(wires: usize, basis: Basis, n: usize) -> Diagram {
    match n {
        0 => Diagram::discard(basis, wires),
        1 => Diagram::Id(wires),
        _ => {
            let copy = Diagram::par_all((0..wires).map(|_| Diagram::spider(basis, Phase::ZERO, 1, n)));
            let mut perm = vec![0; wires * n];
            for i in 0..wires {
                for j in 0..n {
                    perm[i * n + j] = j * wires + i;
                }
            }
            Diagram::seq(copy, permutation(&perm).expect("regrouping is a permutation"))
        }
    }
}

/// `Σ_s |s⟩|s⟩` on `2k` wires: wire `i` is paired with wire `k + i`.
pub fn cups(k: usize) -> Diagram {
    let pairs = Diagram::par_all((0..k).map(|_| Diagram::Cup));
    Diagram::seq(pairs, interleave_to_blocks(k))
}

/// `Σ_s ⟨s|⟨s|` on `2k` wires: wire `i` is paired with wire `k + i`.
pub fn caps(k: usize) -> Diagram {
    let pairs = Diagram::par_all((0..k).map(|_| Diagram::Cap));
    Diagram::seq(interleave_to_blocks(k).transpose(), pairs)
}

/// Sends `a0 b0 a1 b1 …` to `a0 a1 … b0 b1 …`.
fn interleave_to_blocks(k: usize) -> Diagram {
    let mut perm = vec![0; 2 * k];
    for i in 0..k {
        perm[2 * i] = i;
        perm[2 * i + 1] = k + i;
    }
    permutation(&perm).expect("interleaving is a permutation")
}
