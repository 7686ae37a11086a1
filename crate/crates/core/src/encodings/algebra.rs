use crate::gf2::{BitVec, Gf2Basis, Insert};
use crate::majorana::{MajoranaKind, MajoranaMonomial};
use crate::pauli::PauliOp;

use super::{Encoding, LogicalGenerator};

/// Exact relation `q = i^k S G` where `S` is a product of stabilizer
/// generators and `G` a product of logical generators, so that on the code
/// space `q` acts as `fermion`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub fermion: MajoranaMonomial,
    /// Indices into the stabilizer generator list.
    pub stabilizers: Vec<usize>,
    /// Indices into [`LogicalAlgebra::generators`].
    pub generators: Vec<usize>,
}

/// Linear-algebra view of an encoding: stabilizers plus logical generators,
/// with both the qubit side and the fermion side reduced over GF(2).
#[derive(Clone, Debug)]
pub struct LogicalAlgebra {
    n_qubits: usize,
    n_modes: usize,
    stabilizers: Vec<PauliOp>,
    generators: Vec<LogicalGenerator>,
    stab_basis: Gf2Basis,
    stab_items: Vec<usize>,
    pauli_basis: Gf2Basis,
    // slot -> item, items below stabilizers.len() are stabilizers
    pauli_items: Vec<usize>,
    fermion_basis: Gf2Basis,
    fermion_items: Vec<usize>,
    violations: Vec<String>,
    parity: Option<u8>,
}

pub(crate) fn fermion_vector(m: &MajoranaMonomial) -> BitVec {
    let mut v = BitVec::zeros(2 * m.n_modes());
    for &(mode, kind) in m.factors() {
        v.set(2 * mode + usize::from(kind == MajoranaKind::CPrime), true);
    }
    v
}

fn pauli_product<'a>(n: usize, ops: impl IntoIterator<Item = &'a PauliOp>) -> PauliOp {
    ops.into_iter().fold(PauliOp::identity(n), |acc, p| &acc * p)
}

fn fermion_product<'a>(n: usize, ops: impl IntoIterator<Item = &'a MajoranaMonomial>) -> MajoranaMonomial {
    ops.into_iter().fold(MajoranaMonomial::identity(n), |acc, m| &acc * m)
}

/// `k` with `target = i^k base`; both must have the same letters.
fn phase_gap(target: u8, base: u8) -> u8 {
    (target + 4 - base) % 4
}

impl LogicalAlgebra {
    pub fn new(enc: &Encoding) -> Self {
        Self::from_parts(enc.n_qubits, enc.n_modes, enc.stabilizers.clone(), enc.logical_generators())
    }

    pub fn from_parts(
        n_qubits: usize,
        n_modes: usize,
        stabilizers: Vec<PauliOp>,
        generators: Vec<LogicalGenerator>,
    ) -> Self {
        let n_items = stabilizers.len() + generators.len();
        let mut stab_basis = Gf2Basis::new(2 * n_qubits, stabilizers.len().max(1));
        let mut stab_items = Vec::new();
        let mut pauli_basis = Gf2Basis::new(2 * n_qubits, n_items.max(1));
        let mut pauli_items = Vec::new();
        let mut fermion_basis = Gf2Basis::new(2 * n_modes, generators.len().max(1));
        let mut fermion_items = Vec::new();
        let mut pauli_deps = Vec::new();
        let mut fermion_deps = Vec::new();

        for (k, s) in stabilizers.iter().enumerate() {
            let v = s.symplectic_vector();
            if let Insert::Added(_) = stab_basis.insert(&v) {
                stab_items.push(k);
            }
            match pauli_basis.insert(&v) {
                Insert::Added(_) => pauli_items.push(k),
                Insert::Dependent(slots) => pauli_deps.push((k, slots)),
            }
        }
        for (g, gen) in generators.iter().enumerate() {
            let item = stabilizers.len() + g;
            match pauli_basis.insert(&gen.pauli.symplectic_vector()) {
                Insert::Added(_) => pauli_items.push(item),
                Insert::Dependent(slots) => pauli_deps.push((item, slots)),
            }
            match fermion_basis.insert(&fermion_vector(&gen.fermion)) {
                Insert::Added(_) => fermion_items.push(g),
                Insert::Dependent(slots) => fermion_deps.push((g, slots)),
            }
        }

        let mut alg = LogicalAlgebra {
            n_qubits,
            n_modes,
            stabilizers,
            generators,
            stab_basis,
            stab_items,
            pauli_basis,
            pauli_items,
            fermion_basis,
            fermion_items,
            violations: Vec::new(),
            parity: None,
        };
        let parity = MajoranaMonomial::parity_operator(n_modes);
        alg.parity = alg
            .fermion_to_pauli(&parity)
            .and_then(|p| alg.stabilizer_phase(&p));
        alg.violations = alg.check_relations(&pauli_deps, &fermion_deps);
        alg
    }

    fn check_relations(
        &self,
        pauli_deps: &[(usize, Vec<usize>)],
        fermion_deps: &[(usize, Vec<usize>)],
    ) -> Vec<String> {
        let n_stab = self.stabilizers.len();
        let mut out = Vec::new();
        for (item, slots) in pauli_deps {
            let items: Vec<usize> = slots.iter().map(|&s| self.pauli_items[s]).collect();
            let q = pauli_product(self.n_qubits, items.iter().map(|&i| self.item_pauli(i)));
            let own = self.item_pauli(*item);
            let k = phase_gap(own.phase(), q.phase());
            let f = fermion_product(
                self.n_modes,
                items.iter().filter(|&&i| i >= n_stab).map(|&i| &self.generators[i - n_stab].fermion),
            )
            .times_i_pow(k);
            let expected = if *item >= n_stab {
                self.generators[item - n_stab].fermion.clone()
            } else {
                MajoranaMonomial::identity(self.n_modes)
            };
            // with fixed parity, relations may pick up a factor P = i^p
            let via_parity = self.parity.map(|p| {
                (&expected * &MajoranaMonomial::parity_operator(self.n_modes)).times_i_pow((4 - p) % 4)
            });
            if f != expected && via_parity.as_ref() != Some(&f) {
                out.push(format!("{} = {} on qubits but {} on modes", self.item_label(*item), own, f));
            }
        }
        for (g, slots) in fermion_deps {
            let gens: Vec<usize> = slots.iter().map(|&s| self.fermion_items[s]).collect();
            let f = fermion_product(self.n_modes, gens.iter().map(|&i| &self.generators[i].fermion));
            let own = &self.generators[*g];
            let k = phase_gap(own.fermion.phase(), f.phase());
            let q = pauli_product(self.n_qubits, gens.iter().map(|&i| &self.generators[i].pauli)).times_i_pow(k);
            let rest = &q.inverse() * &own.pauli;
            if self.stabilizer_phase(&rest) != Some(0) {
                out.push(format!("{} is not fixed by its fermionic relation", own.label));
            }
        }
        out
    }

    fn item_pauli(&self, item: usize) -> &PauliOp {
        if item < self.stabilizers.len() {
            &self.stabilizers[item]
        } else {
            &self.generators[item - self.stabilizers.len()].pauli
        }
    }

    fn item_label(&self, item: usize) -> String {
        if item < self.stabilizers.len() {
            format!("stabilizer {item}")
        } else {
            self.generators[item - self.stabilizers.len()].label.clone()
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn stabilizers(&self) -> &[PauliOp] {
        &self.stabilizers
    }

    pub fn generators(&self) -> &[LogicalGenerator] {
        &self.generators
    }

    pub fn stabilizer_rank(&self) -> usize {
        self.stab_basis.rank()
    }

    /// Rank of stabilizers and logical generators together.
    pub fn normalizer_rank(&self) -> usize {
        self.pauli_basis.rank()
    }

    /// Relations among generators that hold on one side but not the other.
    pub fn violations(&self) -> &[String] {
        &self.violations
    }

    /// `Some(k)` when the fermion parity acts as `i^k` on the code space.
    pub fn fixed_parity(&self) -> Option<u8> {
        self.parity
    }

    /// If `q` lies in the stabilizer group up to a phase, `k` with
    /// `q = i^k S` for a product `S` of generators.
    pub fn stabilizer_phase(&self, q: &PauliOp) -> Option<u8> {
        let slots = self.stab_basis.solve(&q.symplectic_vector())?;
        let s = pauli_product(self.n_qubits, slots.iter().map(|&s| &self.stabilizers[self.stab_items[s]]));
        Some(phase_gap(q.phase(), s.phase()))
    }

    /// Stabilizer generator indices whose product equals `q` up to phase.
    pub fn stabilizer_support(&self, q: &PauliOp) -> Option<Vec<usize>> {
        let slots = self.stab_basis.solve(&q.symplectic_vector())?;
        Some(slots.iter().map(|&s| self.stab_items[s]).collect())
    }

    pub fn pauli_to_fermion(&self, q: &PauliOp) -> Option<Decomposition> {
        let slots = self.pauli_basis.solve(&q.symplectic_vector())?;
        let n_stab = self.stabilizers.len();
        let mut items: Vec<usize> = slots.iter().map(|&s| self.pauli_items[s]).collect();
        items.sort_unstable();
        let prod = pauli_product(self.n_qubits, items.iter().map(|&i| self.item_pauli(i)));
        let k = phase_gap(q.phase(), prod.phase());
        let generators: Vec<usize> = items.iter().filter(|&&i| i >= n_stab).map(|&i| i - n_stab).collect();
        let fermion =
            fermion_product(self.n_modes, generators.iter().map(|&g| &self.generators[g].fermion)).times_i_pow(k);
        Some(Decomposition {
            fermion,
            stabilizers: items.into_iter().filter(|&i| i < n_stab).collect(),
            generators,
        })
    }

    pub fn fermion_to_pauli(&self, m: &MajoranaMonomial) -> Option<PauliOp> {
        let slots = self.fermion_basis.solve(&fermion_vector(m))?;
        let mut gens: Vec<usize> = slots.iter().map(|&s| self.fermion_items[s]).collect();
        gens.sort_unstable();
        let f = fermion_product(self.n_modes, gens.iter().map(|&g| &self.generators[g].fermion));
        let k = phase_gap(m.phase(), f.phase());
        Some(pauli_product(self.n_qubits, gens.iter().map(|&g| &self.generators[g].pauli)).times_i_pow(k))
    }
}
