//! OpenQASM 2.0 emission.

use std::fmt::Write;

use crate::circuit::{CircuitIr, Gate};

/// Shortest decimal that parses back to the same `f64`; `-0` prints as `0`.
fn angle(value: f64) -> String {
    if value == 0.0 {
        "0".to_string()
    } else {
        format!("{value}")
    }
}

/// Render a circuit as OpenQASM 2.0. Controlled Y-rotations are written as
/// `cu3(angle,0,0)`. Every statement ends in a newline.
pub fn export_qasm(circuit: &CircuitIr, with_measurement: bool) -> String {
    let n = circuit.n_qubits();
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    writeln!(out, "qreg q[{n}];").unwrap();
    if with_measurement {
        writeln!(out, "creg c[{n}];").unwrap();
    }
    for gate in circuit.gates() {
        match *gate {
            Gate::PauliX { target } => writeln!(out, "x q[{target}];"),
            Gate::ControlledRy {
                angle: a,
                control,
                target,
            } => {
                writeln!(out, "cu3({},0,0) q[{control}],q[{target}];", angle(a))
            }
            Gate::Cnot { control, target } => writeln!(out, "cx q[{control}],q[{target}];"),
        }
        .unwrap();
    }
    if with_measurement {
        for q in 0..n {
            writeln!(out, "measure q[{q}] -> c[{q}];").unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_circuit, AngleVector};

    #[test]
    fn single_atom_without_measurement() {
        let c = build_circuit(&AngleVector { thetas: vec![0.0] }).unwrap();
        let text = export_qasm(&c, false);
        assert_eq!(
            text,
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nx q[0];\ncu3(0,0,0) q[0],q[1];\ncx q[1],q[0];\n"
        );
        assert_eq!(text.lines().count(), 6);
        assert_eq!(text.lines().last(), Some("cx q[1],q[0];"));
    }

    #[test]
    fn measurement_lines() {
        let c = build_circuit(&AngleVector {
            thetas: vec![0.4, -0.2],
        })
        .unwrap();
        let text = export_qasm(&c, true);
        assert_eq!(text.lines().filter(|l| l.starts_with("measure")).count(), 3);
        assert!(text.contains("creg c[3];\n"));
        assert!(text.contains("cu3(0.8,0,0) q[0],q[2];\n"));
        assert!(text.contains("cu3(-0.4,0,0) q[2],q[1];\n"));
        assert!(text.lines().all(|l| l == l.trim_end()));
        assert!(text.ends_with("measure q[2] -> c[2];\n"));
    }

    #[test]
    fn angles_round_trip() {
        for v in [1.8545904360032244, 1e-20, -3.0000000000000004, 0.1 + 0.2] {
            assert_eq!(angle(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(angle(-0.0), "0");
    }
}
