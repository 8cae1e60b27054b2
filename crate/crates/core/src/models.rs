//! Reference generators used by the experiments, the examples and the tests.

use crate::error::Result;
use crate::lattice::{Lattice, Region};
use crate::linalg::{self, CMat};
use crate::spin_system::{
    davies_generator, pauli, pauli_string, DaviesOptions, Liouvillian, LocalTerm,
};

fn scaled(a: &CMat, x: f64) -> CMat {
    linalg::scaled(a.as_ref(), linalg::re(x))
}

fn site(l: &Lattice, s: usize) -> Region {
    Region::new(l, [s]).expect("site in range")
}

fn bond(l: &Lattice, a: usize, b: usize) -> Region {
    Region::new(l, [a, b]).expect("bond in range")
}

/// Jumps √(γ/4) σ_{x,y,z}: every Pauli decays at rate γ.
pub fn depolarizing_qubit(gamma: f64) -> Result<Liouvillian> {
    let lat = Lattice::chain(1);
    let c = (gamma / 4.0).sqrt();
    let jumps = "XYZ".chars().map(|p| scaled(&pauli(p), c)).collect();
    Liouvillian::qubits(lat.clone(), vec![LocalTerm::dissipator(site(&lat, 0), jumps)?])
}

/// Jump √γ σ_z.
pub fn dephasing_qubit(gamma: f64) -> Result<Liouvillian> {
    let lat = Lattice::chain(1);
    let term = LocalTerm::dissipator(site(&lat, 0), vec![scaled(&pauli('Z'), gamma.sqrt())])?;
    Liouvillian::qubits(lat, vec![term])
}

/// Jump √γ σ₋ only.
pub fn amplitude_damping_qubit(gamma: f64) -> Result<Liouvillian> {
    let lat = Lattice::chain(1);
    let term = LocalTerm::dissipator(site(&lat, 0), vec![scaled(&pauli('-'), gamma.sqrt())])?;
    Liouvillian::qubits(lat, vec![term])
}

/// Davies generator of H = σ_z with coupling σ_x.
pub fn davies_qubit(beta: f64, eta0: f64) -> Result<Liouvillian> {
    let lat = Lattice::chain(1);
    let opts = DaviesOptions {
        beta,
        eta0,
        ..Default::default()
    };
    davies_generator(
        &lat,
        &[2],
        &[(pauli('Z'), site(&lat, 0))],
        &[(pauli('X'), site(&lat, 0))],
        &opts,
    )
}

/// Ising chain H = Σ h_i σ_z^i + J Σ σ_z^i σ_z^{i+1}.
pub fn ising_terms(lat: &Lattice, fields: &[f64], j: f64) -> Vec<(CMat, Region)> {
    let n = lat.sites();
    let mut out: Vec<(CMat, Region)> = (0..n).map(|i| (scaled(&pauli('Z'), fields[i]), site(lat, i))).collect();
    if j != 0.0 {
        for i in 0..n.saturating_sub(1) {
            out.push((scaled(&pauli_string("ZZ"), j), bond(lat, i, i + 1)));
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct DaviesChain {
    pub sites: usize,
    pub field: f64,
    /// site-dependent field increments, breaking degeneracies
    pub field_step: f64,
    pub coupling: f64,
    pub beta: f64,
    pub eta0: f64,
    pub include_hamiltonian: bool,
}

impl Default for DaviesChain {
    fn default() -> Self {
        DaviesChain {
            sites: 2,
            field: 1.0,
            field_step: 0.0,
            coupling: 0.2,
            beta: 0.5,
            eta0: 1.0,
            include_hamiltonian: true,
        }
    }
}

impl DaviesChain {
    /// Davies generator of the Ising chain with σ_x couplings on every site.
    pub fn build(&self) -> Result<Liouvillian> {
        let lat = Lattice::chain(self.sites);
        let fields: Vec<f64> = (0..self.sites).map(|i| self.field + self.field_step * i as f64).collect();
        let h = ising_terms(&lat, &fields, self.coupling);
        let couplings: Vec<(CMat, Region)> = (0..self.sites).map(|i| (pauli('X'), site(&lat, i))).collect();
        let opts = DaviesOptions {
            beta: self.beta,
            eta0: self.eta0,
            include_hamiltonian: self.include_hamiltonian,
            ..Default::default()
        };
        davies_generator(&lat, &vec![2; self.sites], &h, &couplings, &opts)
    }

    pub fn hamiltonian(&self) -> Result<CMat> {
        let lat = Lattice::chain(self.sites);
        let fields: Vec<f64> = (0..self.sites).map(|i| self.field + self.field_step * i as f64).collect();
        crate::spin_system::global_operator(&vec![2; self.sites], &ising_terms(&lat, &fields, self.coupling))
    }
}

/// XX chain J(σxσx + σyσy)/2 on nearest neighbours with loss σ₋ at rate
/// `loss` and gain σ₊ at rate `gain` on every site.
pub fn xx_loss_gain_chain(n: usize, j: f64, loss: f64, gain: f64) -> Result<Liouvillian> {
    let lat = Lattice::chain(n);
    let hop = scaled(&(pauli_string("XX") + pauli_string("YY")), 0.5 * j);
    let mut terms = Vec::new();
    for i in 0..n.saturating_sub(1) {
        terms.push(LocalTerm::hamiltonian(bond(&lat, i, i + 1), hop.clone())?);
    }
    for i in 0..n {
        let mut jumps = Vec::new();
        if loss > 0.0 {
            jumps.push(scaled(&pauli('-'), loss.sqrt()));
        }
        if gain > 0.0 {
            jumps.push(scaled(&pauli('+'), gain.sqrt()));
        }
        if !jumps.is_empty() {
            terms.push(LocalTerm::dissipator(site(&lat, i), jumps)?);
        }
    }
    Liouvillian::qubits(lat, terms)
}

/// XX chain with single-site depolarizing noise of rate `gamma`.
pub fn xx_depolarizing_chain(n: usize, j: f64, gamma: f64) -> Result<Liouvillian> {
    let lat = Lattice::chain(n);
    let hop = scaled(&(pauli_string("XX") + pauli_string("YY")), 0.5 * j);
    let c = (gamma / 4.0).sqrt();
    let mut terms = Vec::new();
    for i in 0..n.saturating_sub(1) {
        terms.push(LocalTerm::hamiltonian(bond(&lat, i, i + 1), hop.clone())?);
    }
    if gamma > 0.0 {
        for i in 0..n {
            let jumps = "XYZ".chars().map(|p| scaled(&pauli(p), c)).collect();
            terms.push(LocalTerm::dissipator(site(&lat, i), jumps)?);
        }
    }
    Liouvillian::qubits(lat, terms)
}

/// Independent depolarizing qubits with no coupling.
pub fn uncoupled_chain(n: usize, gamma: f64) -> Result<Liouvillian> {
    xx_depolarizing_chain(n, 0.0, gamma).and_then(|l| {
        let terms = l.terms().iter().filter(|t| t.hamiltonian.is_none()).cloned().collect();
        l.with_terms(terms)
    })
}

/// Extra loss √rate σ₋ on one site.
pub fn extra_loss(lat: &Lattice, s: usize, rate: f64) -> Result<LocalTerm> {
    LocalTerm::dissipator(site(lat, s), vec![scaled(&pauli('-'), rate.sqrt())])
}
