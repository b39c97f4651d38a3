//! Every example under examples/ runs to completion.

#[path = "../examples/molecular_orbital.rs"]
mod molecular_orbital;

#[test]
fn molecular_orbital_runs() {
    molecular_orbital::main().unwrap();
}

#[path = "../examples/wootters_equivalence.rs"]
mod wootters_equivalence;

#[test]
fn wootters_equivalence_runs() {
    wootters_equivalence::main().unwrap();
}

#[path = "../examples/perturbation_response.rs"]
mod perturbation_response;

#[test]
fn perturbation_response_runs() {
    perturbation_response::main().unwrap();
}

#[path = "../examples/bell_overlap_curve.rs"]
mod bell_overlap_curve;

#[test]
fn bell_overlap_curve_runs() {
    bell_overlap_curve::main().unwrap();
}

#[path = "../examples/omar_apparatus.rs"]
mod omar_apparatus;

#[test]
fn omar_apparatus_runs() {
    omar_apparatus::main().unwrap();
}

#[path = "../examples/teleport_two_qubits.rs"]
mod teleport_two_qubits;

#[test]
fn teleport_two_qubits_runs() {
    teleport_two_qubits::main().unwrap();
}

#[path = "../examples/state_file.rs"]
mod state_file;

#[test]
fn state_file_runs() {
    state_file::main().unwrap();
}
