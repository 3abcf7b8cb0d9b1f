import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jaqalc.analyzer import ArrayView, SingleView, analyze, resolve_qubit
from jaqalc.ast import IntLiteral, NameRef, QubitRef
from jaqalc.diagnostics import has_errors
from jaqalc.errors import JaqalError
from jaqalc.parser import parse


def analyzed(source, gates):
    program, diags = parse(source)
    assert not has_errors(diags), diags
    return analyze(program, gates)


def codes(source, gates):
    _, diags = analyzed(source, gates)
    return {d.code for d in diags}


def accept(source, gates):
    table, diags = analyzed(source, gates)
    assert not has_errors(diags), diags
    return table


# -- alias resolution ------------------------------------------------------------

def test_slice_alias_materializes_odd_qubits(gates):
    table = accept("register q[7]\nmap ancilla q[1:7:2]\n", gates)
    view = table.aliases["ancilla"].view
    assert view.offsets() == [1, 3, 5]
    for i, expected in enumerate([1, 3, 5]):
        ref = QubitRef("ancilla", IntLiteral(i))
        assert resolve_qubit(ref, table) == expected


def test_whole_register_alias(gates):
    table = accept("register q[3]\nmap qubits q\n", gates)
    assert resolve_qubit(QubitRef("qubits", IntLiteral(2)), table) == 2


def test_single_qubit_alias(gates):
    table = accept("register q[3]\nmap ancilla q[0]\n", gates)
    assert table.aliases["ancilla"].view == SingleView(0)
    assert resolve_qubit(NameRef("ancilla"), table) == 0


def test_chained_slices_compose(gates):
    table = accept("register q[7]\nmap a q[1:7:2]\nmap b a[1:3]\n", gates)
    assert resolve_qubit(QubitRef("b", IntLiteral(0)), table) == 3
    assert table.aliases["b"].view.offsets() == [3, 5]


def test_negative_slice_components(gates):
    table = accept("register q[5]\nmap tail q[-2:]\n", gates)
    assert table.aliases["tail"].view.offsets() == [3, 4]


def test_negative_map_index_counts_from_end(gates):
    table = accept("register q[5]\nmap last q[-1]\n", gates)
    assert table.aliases["last"].view == SingleView(4)


def test_empty_alias_is_a_warning_not_error(gates):
    table, diags = analyzed("register q[3]\nmap none q[2:1]\n", gates)
    assert not has_errors(diags)
    assert {d.code for d in diags} == {"empty-alias"}


def test_let_in_register_size_and_slice(gates):
    table = accept("let n 6\nregister q[n]\nmap half q[0:n:2]\n", gates)
    assert table.register.size == 6
    assert table.aliases["half"].view.offsets() == [0, 2, 4]


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_slice_composition_matches_list_oracle(data):
    """Affine view composition agrees with brute-force Python list slicing
    for chains up to three selectors deep."""
    size = data.draw(st.integers(min_value=1, max_value=16))
    depth = data.draw(st.integers(min_value=1, max_value=3))
    component = st.one_of(st.none(),
                          st.integers(min_value=-2 * size, max_value=2 * size))
    view = ArrayView(0, 1, size)
    reference = list(range(size))
    for _ in range(depth):
        start = data.draw(component)
        stop = data.draw(component)
        step = data.draw(st.one_of(
            st.none(),
            st.integers(min_value=-size, max_value=size).filter(lambda v: v)))
        reference = reference[slice(start, stop, step)]
        i0, i1, istep = slice(start, stop, step).indices(view.length)
        view = ArrayView(view.offset(i0), view.step * istep,
                         len(range(i0, i1, istep)))
    assert view.offsets() == reference


def test_resolve_qubit_error_codes(gates):
    table = accept("register q[3]\nmap one q[0]\nlet n 2\n", gates)
    with pytest.raises(JaqalError) as err:
        resolve_qubit(QubitRef("nope", IntLiteral(0)), table)
    assert err.value.code == "undefined-name"
    with pytest.raises(JaqalError) as err:
        resolve_qubit(NameRef("q"), table)
    assert err.value.code == "bad-index"
    with pytest.raises(JaqalError) as err:
        resolve_qubit(QubitRef("one", IntLiteral(0)), table)
    assert err.value.code == "bad-index"
    with pytest.raises(JaqalError) as err:
        resolve_qubit(QubitRef("q", IntLiteral(3)), table)
    assert err.value.code == "index-out-of-bounds"
    with pytest.raises(JaqalError) as err:
        resolve_qubit(NameRef("n"), table)
    assert err.value.code == "type-mismatch"


# -- per-rule diagnostics ----------------------------------------------------------

def test_second_register_rejected(gates):
    assert "duplicate-register" in codes(
        "register q[2]\nregister r[2]\nSx q[0]\n", gates)


def test_no_register_rejected_when_gates_run(gates):
    assert "no-register" in codes("prepare_all\nmeasure_all\n", gates)


def test_header_only_program_needs_no_register(gates):
    table, diags = analyzed("let total_count 4\nlet rotations 1.5\n", gates)
    assert not has_errors(diags)


def test_register_size_must_be_positive(gates):
    assert "bad-register-size" in codes("register q[0]\n", gates)
    assert "bad-register-size" in codes("register q[-3]\n", gates)


def test_register_size_requires_integer_constant(gates):
    assert "type-mismatch" in codes("let f 1.5\nregister q[f]\n", gates)


def test_unknown_gate(gates):
    assert "unknown-gate" in codes("register q[1]\nQz q[0]\n", gates)


def test_arity_mismatch(gates):
    assert "arity-mismatch" in codes("register q[2]\nSx q[0] q[1]\n", gates)


def test_qubit_where_number_expected(gates):
    assert "type-mismatch" in codes("register q[2]\nRx q[0] q[1]\n", gates)


def test_number_where_qubit_expected(gates):
    assert "type-mismatch" in codes("register q[2]\nSx 3\n", gates)


def test_let_cannot_be_a_qubit(gates):
    assert "type-mismatch" in codes(
        "register q[2]\nlet n 1\nSx n\n", gates)


def test_int_let_is_fine_as_angle(gates):
    accept("register q[1]\nlet turns 2\nRx q[0] turns\n", gates)


def test_float_let_rejected_as_loop_count(gates):
    assert "type-mismatch" in codes(
        "register q[1]\nlet f 1.5\nloop f { Sx q[0] }\n", gates)


def test_negative_loop_count_rejected(gates):
    assert "bad-loop-count" in codes(
        "register q[1]\nloop -1 { Sx q[0] }\n", gates)


def test_gate_index_out_of_bounds(gates):
    assert "index-out-of-bounds" in codes("register q[2]\nSx q[5]\n", gates)


def test_negative_gate_index_rejected(gates):
    assert "index-out-of-bounds" in codes("register q[2]\nSx q[-1]\n", gates)


def test_undefined_qubit_base(gates):
    assert "undefined-name" in codes("register q[2]\nSx r[0]\n", gates)


def test_missing_index_on_array(gates):
    assert "bad-index" in codes("register q[2]\nSx q\n", gates)


def test_duplicate_qubit_in_one_gate(gates):
    assert "duplicate-qubit" in codes(
        "register q[2]\nSxx q[0] q[0]\n", gates)


def test_duplicate_names_across_namespaces(gates):
    assert "duplicate-name" in codes(
        "register q[2]\nlet q 3\n", gates)
    assert "duplicate-name" in codes(
        "register q[2]\nmap a q[0]\nmap a q[1]\n", gates)


def test_macro_cannot_shadow_native_gate(gates):
    assert "duplicate-name" in codes(
        "register q[1]\nmacro Sx a { Sy a }\n", gates)


def test_recursive_macro_rejected(gates):
    assert "recursive-macro" in codes(
        "register q[1]\nmacro spin a { Sx a\nspin a }\nspin q[0]\n", gates)


def test_forward_macro_reference_rejected(gates):
    source = ("register q[1]\n"
              "macro first a { second a }\n"
              "macro second a { Sx a }\n"
              "first q[0]\n")
    assert "forward-macro-reference" in codes(source, gates)


def test_macro_param_used_as_qubit_and_number(gates):
    assert "type-mismatch" in codes(
        "register q[1]\nmacro m a { Sx a\nRx q[0] a }\n", gates)


def test_macro_param_cannot_be_loop_count(gates):
    assert "type-mismatch" in codes(
        "register q[1]\nmacro m a { loop a { Sx q[0] } }\n", gates)


def test_macro_param_shadowing_global_rejected(gates):
    assert "duplicate-name" in codes(
        "register q[2]\nmap a q[0]\nmacro m a { Sx a }\n", gates)


def test_macro_arity_checked_at_invocation(gates):
    assert "arity-mismatch" in codes(
        "register q[2]\nmacro m a { Sx a }\nm q[0] q[1]\n", gates)


def test_parallel_conflict_on_shared_qubit(gates):
    assert "parallel-conflict" in codes(
        "register q[1]\n< Sx q[0] | Sy q[0] >\n", gates)


def test_parallel_conflict_through_nested_block(gates):
    assert "parallel-conflict" in codes(
        "register q[2]\n< Px q[0] | { Sx q[1]; Sy q[0] } >\n", gates)


def test_disjoint_parallel_is_fine(gates):
    accept("register q[2]\n< Px q[0] | { Sx q[1] ; Sy q[1] } >\n", gates)


def test_entangler_needs_parallel_exclusivity(gates):
    assert "ms-in-parallel" in codes(
        "register q[3]\n< Sxx q[0] q[1] | Sz q[2] >\n", gates)
    accept("register q[2]\n< Sxx q[0] q[1] >\n", gates)


def test_global_gates_not_in_parallel(gates):
    assert "global-gate-in-parallel" in codes(
        "register q[2]\n< prepare_all | Sx q[0] >\n", gates)
    assert "global-gate-in-parallel" in codes(
        "register q[2]\n< { measure_all } >\n", gates)


def test_macro_with_global_gate_flagged_in_parallel(gates):
    source = ("register q[2]\n"
              "macro m { prepare_all }\n"
              "< m | Sx q[0] >\n")
    assert "global-gate-in-parallel" in codes(source, gates)


def test_analysis_is_deterministic(gates):
    source = "register q[1]\nQz q[0]\nSx q[5]\nloop -2 { Sx q[0] }\n"
    program, _ = parse(source)
    _, first = analyze(program, gates)
    _, second = analyze(program, gates)
    assert first == second


def test_paper_style_listings_pass(gates):
    accept("register q[3]\nmap ancilla q[1]\nSxx q[0] ancilla\n", gates)
    accept("register q[7]\nmap ancilla q[1:7:2]\n", gates)
    accept("register q[2]\n< Sx q[0] | Sy q[1] >\n", gates)
    accept("register q[2]\nloop 7 { Sx q[0]\nSz q[1]\nSxx q[0] q[1] }\n",
           gates)
