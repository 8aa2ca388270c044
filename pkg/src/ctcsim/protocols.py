"""Concrete demonstration circuits and a prepare-and-measure QKD harness.

Two canned demos show perfect discrimination of non-orthogonal states:

* the two-state circuit (swap, then controlled Hadamard) telling |0> from |->
  and thereby breaking B92, and
* the four-state circuit with two CTC qubits telling the four BB84 signal
  states apart after an ancilla qubit is appended.

The session harness plays Alice/Bob rounds over a noiseless channel with a
pluggable eavesdropper: ``none`` (passthrough), ``ctc`` (classify each signal
perfectly through the self-consistency engine and re-prepare it, gaining full
information with zero disturbance), or ``intercept_resend_z`` (measure in the
computational basis and resend the eigenstate, the classic noisy attack).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .deutsch import DeutschInteraction, swap_then_control
from .distinguisher import (
    StateSet,
    UnitaryFamily,
    classify,
    pad_with_ancilla,
    validate_state_set,
)
from .qlinalg import H, X, PureState, basis_ket, identity, minus_ket, plus_ket, swap_gate

EVE_STRATEGIES = ("none", "ctc", "intercept_resend_z")


@dataclass(frozen=True)
class QkdProtocol:
    """Signal-state table for one prepare-and-measure protocol.

    ``encoding`` maps Alice's classical choice to an index into
    ``signal_states``: for BB84 the key is (basis, bit) with basis 0 = Z and
    1 = X; for B92 the key is the bit alone.
    """

    name: str
    signal_states: tuple[PureState, ...]
    encoding: dict

    def state_index(self, bit: int, basis: int | None) -> int:
        if self.name == "B92":
            return self.encoding[bit]
        return self.encoding[(basis, bit)]


@dataclass(frozen=True)
class SessionStats:
    """Summary of one QKD session, computed over sifted positions only.

    ``qber`` is None when nothing was sifted. ``eve_info`` is the fraction
    of sifted bits for which the eavesdropper's record matches Alice's bit.
    """

    signals_sent: int
    sifted: int
    qber: float | None
    eve_info: float
    seed: int

    def to_dict(self) -> dict:
        return {
            "signals_sent": self.signals_sent,
            "sifted": self.sifted,
            "qber": self.qber,
            "qber_undefined": self.qber is None,
            "eve_info": self.eve_info,
            "seed": self.seed,
        }


def b92_protocol() -> QkdProtocol:
    states = (PureState(basis_ket(2, 0)), PureState(minus_ket()))
    return QkdProtocol(name="B92", signal_states=states, encoding={0: 0, 1: 1})


def bb84_protocol() -> QkdProtocol:
    states = (
        PureState(basis_ket(2, 0)),
        PureState(basis_ket(2, 1)),
        PureState(plus_ket()),
        PureState(minus_ket()),
    )
    encoding = {(0, 0): 0, (0, 1): 1, (1, 0): 2, (1, 1): 3}
    return QkdProtocol(name="BB84", signal_states=states, encoding=encoding)


def b92_interaction() -> tuple[DeutschInteraction, StateSet]:
    """The two-state distinguisher: swap, then controlled Hadamard."""
    ix = swap_then_control(2, [identity(2), H])
    s = validate_state_set([PureState(basis_ket(2, 0)), PureState(minus_ket())])
    return ix, s


def bb84_family() -> tuple[UnitaryFamily, StateSet]:
    """The hand-built four-unitary family and the padded BB84 state set.

    Indexed k = 0..3 against the padded signals |00>, |10>, |+0>, |-0>:
    k=0 swaps the two qubits, k=1 flips both, k=2 applies X.H on the first,
    and k=3 swaps then applies X (x) H.
    """
    sw = swap_gate(2)
    unitaries = (
        sw,
        np.kron(X, X),
        np.kron(X @ H, identity(2)),
        np.kron(X, H) @ sw,
    )
    protocol = bb84_protocol()
    padded = pad_with_ancilla(list(protocol.signal_states), 4)
    return UnitaryFamily(dim=4, unitaries=unitaries), padded


def bb84_interaction() -> tuple[DeutschInteraction, StateSet]:
    fam, padded = bb84_family()
    return swap_then_control(4, list(fam.unitaries)), padded


def b92_demo(fp_tol: float = 1e-9) -> dict:
    """Classify both B92 signals through the two-state circuit.

    Raises on any misclassification or fixed-point ambiguity; the report
    carries per-input labels, success probabilities, CTC states, and
    fixed-point diagnostics.
    """
    ix, s = b92_interaction()
    names = ["|0>", "|->"]
    rows = []
    for j in range(2):
        label, prob, fp = classify(ix, s, j, fp_tol)
        if label != j:
            raise RuntimeError(f"B92 demo misclassified input {names[j]} as {label}")
        assert fp.representative is not None
        rows.append(
            {
                "input": names[j],
                "label": label,
                "success_prob": prob,
                "fixed_space_dim": fp.fixed_space_dim,
                "unique": fp.unique,
                "residual": fp.residual,
                "ctc_diag": [float(v) for v in np.real(np.diag(fp.representative.matrix))],
            }
        )
    return {"circuit": "swap + controlled-Hadamard", "classifications": rows}


def bb84_demo(fp_tol: float = 1e-9) -> dict:
    """Classify all four padded BB84 signals and decode (a, b) label bits.

    Output label ab decodes as: a = 0 means a Z eigenstate, a = 1 an X
    eigenstate, in both cases with eigenvalue (-1)^b. Raises on any
    misclassification.
    """
    ix, padded = bb84_interaction()
    names = ["|00>", "|10>", "|+0>", "|-0>"]
    expected_map = {0: "|00>", 1: "|01>", 2: "|10>", 3: "|11>"}
    rows = []
    for j in range(4):
        label, prob, fp = classify(ix, padded, j, fp_tol)
        if label != j:
            raise RuntimeError(f"BB84 demo misclassified input {names[j]} as label {label}")
        a, b = divmod(label, 2)
        rows.append(
            {
                "input": names[j],
                "output": expected_map[label],
                "label": label,
                "a": a,
                "b": b,
                "decoded_basis": "Z" if a == 0 else "X",
                "decoded_eigenvalue": 1 if b == 0 else -1,
                "success_prob": prob,
                "fixed_space_dim": fp.fixed_space_dim,
                "unique": fp.unique,
                "residual": fp.residual,
            }
        )
    return {"circuit": "two-qubit swap + four controlled unitaries", "classifications": rows}


def _born_probability_one(state: np.ndarray, basis: int) -> float:
    """Probability of outcome 1 when measuring a qubit in Z (0) or X (1)."""
    target = basis_ket(2, 1) if basis == 0 else minus_ket()
    return float(abs(target.conj() @ state) ** 2)


def _ctc_labeler(protocol: QkdProtocol) -> dict[int, int]:
    """Per-signal-state classification labels through the CTC distinguisher.

    Classification is deterministic, so each of the protocol's signal states
    is pushed through the engine once and the labels are reused per round.
    The labels are required to reproduce the preparation indices exactly.
    """
    if protocol.name == "B92":
        ix, s = b92_interaction()
    else:
        ix, s = bb84_interaction()
    labels = {}
    for j in range(len(protocol.signal_states)):
        label, prob, fp = classify(ix, s, j)
        if label != j or not fp.unique:
            raise RuntimeError("CTC eavesdropper failed to classify a signal state")
        labels[j] = label
    return labels


def run_qkd(
    protocol: QkdProtocol,
    n_signals: int,
    eve: str,
    seed: int,
    transcript_path: str | Path | None = None,
) -> SessionStats:
    """Simulate a prepare-and-measure session over a noiseless channel.

    Alice draws uniform random signal choices, Eve applies her strategy, and
    Bob measures in a uniformly random basis (BB84 sifts on basis match; B92
    keeps conclusive exclusion outcomes). Outcomes are sampled from exact
    Born probabilities. Fully reproducible from ``seed``; an optional JSON
    lines transcript records every round.
    """
    if n_signals < 1:
        raise ValueError("n_signals must be at least 1")
    if eve not in EVE_STRATEGIES:
        raise ValueError(f"unknown eavesdropper strategy {eve!r}")
    rng = np.random.default_rng(seed)
    eve_labels = _ctc_labeler(protocol) if eve == "ctc" else None

    records = []
    sifted = 0
    errors = 0
    eve_known = 0
    for index in range(n_signals):
        alice_bit = int(rng.integers(2))
        if protocol.name == "BB84":
            alice_basis: int | None = int(rng.integers(2))
        else:
            alice_basis = None
        state_idx = protocol.state_index(alice_bit, alice_basis)
        flying = protocol.signal_states[state_idx].vector

        eve_label: int | None = None
        eve_bit: int | None = None
        if eve == "ctc":
            assert eve_labels is not None
            eve_label = eve_labels[state_idx]
            flying = protocol.signal_states[eve_label].vector
            if protocol.name == "BB84":
                eve_bit = eve_label % 2
            else:
                eve_bit = eve_label
        elif eve == "intercept_resend_z":
            p1 = _born_probability_one(flying, basis=0)
            outcome = int(rng.random() < p1)
            eve_label = outcome
            eve_bit = outcome
            flying = basis_ket(2, outcome)

        bob_basis = int(rng.integers(2))
        p1 = _born_probability_one(flying, basis=bob_basis)
        bob_outcome = int(rng.random() < p1)

        if protocol.name == "BB84":
            is_sifted = bob_basis == alice_basis
            bob_bit = bob_outcome
        else:
            # Exclusion decoding: Z-outcome 1 rules out |0> (bit 1);
            # X-outcome 0 (the |+> result) rules out |-> (bit 0).
            if bob_basis == 0 and bob_outcome == 1:
                is_sifted, bob_bit = True, 1
            elif bob_basis == 1 and bob_outcome == 0:
                is_sifted, bob_bit = True, 0
            else:
                is_sifted, bob_bit = False, None

        is_error = bool(is_sifted and bob_bit != alice_bit)
        if is_sifted:
            sifted += 1
            errors += int(is_error)
            if eve_bit is not None and eve_bit == alice_bit:
                eve_known += 1
        records.append(
            {
                "index": index,
                "alice_bit": alice_bit,
                "alice_basis": None if alice_basis is None else ("Z", "X")[alice_basis],
                "eve_label": eve_label,
                "bob_basis": ("Z", "X")[bob_basis],
                "bob_outcome": bob_outcome,
                "sifted": is_sifted,
                "error": is_error,
            }
        )

    if transcript_path is not None:
        with open(transcript_path, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")

    qber = errors / sifted if sifted else None
    eve_info = eve_known / sifted if sifted else 0.0
    return SessionStats(
        signals_sent=n_signals, sifted=sifted, qber=qber, eve_info=eve_info, seed=seed
    )
