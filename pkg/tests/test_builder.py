from __future__ import annotations

import pytest

from cpskg.builder import (
    DataElementSpec,
    DuplicateIdError,
    InvalidTimestampError,
    LevelInversionError,
    MissingTypeDescriptionError,
    ModelBuilder,
    NotAnObjectError,
    NotAnOperatorError,
    OperatorSpec,
    ProcessSpec,
    StateSpec,
    StructureNode,
    TypeMismatchError,
    UnresolvedReferenceError,
    slugify,
)
from cpskg.mapper import om_to_rdf
from cpskg.om.tree import Symbol, Variable, app
from cpskg.rdf import RDF, Literal, PatternQuery, Triple, Var, match
from cpskg.vocab import CpsVocabulary

BASE = "http://example.org/unit"
V = CpsVocabulary.default()


@pytest.fixture
def builder() -> ModelBuilder:
    return ModelBuilder(BASE)


def ehsa_structure() -> StructureNode:
    components = ["EHSV", "MSV", "EV1", "EV2", "Accumulator", "ActuatorMainRam"]
    return StructureNode("EHSA", "Module", children=[StructureNode(c, "Component") for c in components])


def test_lifecycle_record_one_set_is_four_triples(builder):
    builder.add_lifecycle_record("Record", ["ModelSet"])
    assert len(builder.graph) == 4
    record, info_set = builder.iri("Record"), builder.iri("ModelSet")
    assert Triple(record, RDF.type, V.din77005.LifeCycleRecord) in builder.graph
    assert Triple(info_set, RDF.type, V.din77005.InformationSet) in builder.graph
    assert Triple(record, V.din77005.hasInformationSet, info_set) in builder.graph
    assert Triple(info_set, RDF.type, V.cpsmod.SystemModel) in builder.graph


def test_lifecycle_record_zero_sets_is_one_triple(builder):
    builder.add_lifecycle_record("Record", [])
    assert len(builder.graph) == 1


def test_lifecycle_duplicate_id(builder):
    builder.add_lifecycle_record("Record", ["S1"])
    with pytest.raises(DuplicateIdError):
        builder.add_lifecycle_record("Record", ["S2"])


def test_structure_counts_for_module_with_six_components(builder):
    builder.add_structure(ehsa_structure())
    assert len(builder.graph) == 13  # 7 type triples + 6 consistsOf
    assert Triple(builder.iri("EHSA"), RDF.type, V.vdi2206.Module) in builder.graph
    assert len(builder.graph.triples(None, V.vdi2206.consistsOf)) == 6


def test_structure_single_component_is_one_triple(builder):
    builder.add_structure(StructureNode("Ram", "Component"))
    assert len(builder.graph) == 1


def test_structure_level_inversion(builder):
    bad = StructureNode("C", "Component", children=[StructureNode("M", "Module")])
    with pytest.raises(LevelInversionError):
        builder.add_structure(bad)


def test_structure_repeated_node_rejected(builder):
    bad = StructureNode("S", "Module", children=[StructureNode("S", "Component")])
    with pytest.raises(Exception):
        builder.add_structure(bad)


def active_mode() -> ProcessSpec:
    return ProcessSpec(
        id="ActiveMode",
        states=[StateSpec("Flow", "Energy"), StateSpec("Signal", "Information")],
        operators=[
            OperatorSpec("HydraulicControl", "EHSV", inputs=["Signal"], outputs=["Flow"]),
            OperatorSpec("LinearMotionExecution", "ActuatorMainRam", inputs=["Flow"], outputs=["Signal"]),
            OperatorSpec("PressureStabilization", "Accumulator", inputs=["Flow"], outputs=["Signal"]),
        ],
    )


def test_process_operator_assignment_pairs(builder):
    builder.add_structure(ehsa_structure())
    builder.add_process(active_mode())
    rows = match(builder.graph, PatternQuery.of((Var("op"), V.vdi3682.isAssignedTo, Var("res"))))
    pairs = {(r["op"].value.rsplit("/", 1)[1], r["res"].value.rsplit("/", 1)[1]) for r in rows}
    assert pairs == {
        ("HydraulicControl", "EHSV"),
        ("LinearMotionExecution", "ActuatorMainRam"),
        ("PressureStabilization", "Accumulator"),
    }


def test_process_operator_without_states(builder):
    builder.add_structure(StructureNode("Ram", "Component"))
    builder.add_process(ProcessSpec("P", operators=[OperatorSpec("Op", "Ram")]))
    op = builder.iri("Op")
    assert Triple(op, RDF.type, V.vdi3682.ProcessOperator) in builder.graph
    assert Triple(builder.iri("P"), V.vdi3682.consistsOf, op) in builder.graph
    assert Triple(op, V.vdi3682.isAssignedTo, builder.iri("Ram")) in builder.graph
    assert Triple(builder.iri("Ram"), RDF.type, V.vdi3682.TechnicalResource) in builder.graph
    assert not builder.graph.triples(op, V.vdi3682.hasInput)


def test_process_bad_state_kind(builder):
    builder.add_structure(StructureNode("Ram", "Component"))
    spec = ProcessSpec("P", states=[StateSpec("S", "Material")], operators=[])
    with pytest.raises(UnresolvedReferenceError):
        builder.add_process(spec)


def test_process_unknown_resource(builder):
    with pytest.raises(UnresolvedReferenceError):
        builder.add_process(ProcessSpec("P", operators=[OperatorSpec("Op", "Ghost")]))


def test_data_element_six_triples(builder):
    builder.add_structure(StructureNode("Ram", "Component"))
    builder.add_process(ProcessSpec("P", states=[StateSpec("Flow", "Energy")], operators=[]))
    before = len(builder.graph)
    element = builder.add_data_element(
        builder.iri("Flow"),
        DataElementSpec("Q1_DE", "Volume flow into chamber 1", instance_descriptions=["unit m^3/s"]),
    )
    assert len(builder.graph) - before == 6
    type_nodes = builder.graph.objects(element, V.dinen61360.hasTypeDescription)
    assert type_nodes == [builder.node_iri("type", slugify("Volume flow into chamber 1"))]


def test_data_element_missing_type_description(builder):
    builder.add_structure(StructureNode("Ram", "Component"))
    with pytest.raises(MissingTypeDescriptionError):
        builder.add_data_element(builder.iri("Ram"), DataElementSpec("D", "  "))


def test_data_element_two_instance_descriptions(builder):
    builder.add_structure(StructureNode("Ram", "Component"))
    element = builder.add_data_element(
        builder.iri("Ram"),
        DataElementSpec("D", "some quantity", instance_descriptions=["unit one", "sampled at 1 kHz"]),
    )
    assert len(builder.graph.objects(element, V.dinen61360.hasInstanceDescription)) == 2


def test_attach_behavior_model_three_then_one_triples(builder):
    builder.add_structure(StructureNode("Ram", "Component"))
    builder.add_process(ProcessSpec("P", operators=[OperatorSpec("Op", "Ram")]))
    op = builder.iri("Op")
    first = om_to_rdf(app(Symbol("arith1", "plus"), Variable("x"), Variable("y")), BASE, "e1", om=V.om)
    second = om_to_rdf(Variable("z"), BASE, "e2", om=V.om)
    builder.graph.update(first.graph)
    builder.graph.update(second.graph)

    before = len(builder.graph)
    model = builder.attach_behavior_model(op, first.object_node)
    assert len(builder.graph) - before == 3
    assert Triple(model, RDF.type, V.vdi2206.MathematicalModel) in builder.graph

    before = len(builder.graph)
    assert builder.attach_behavior_model(op, second.object_node) == model
    assert len(builder.graph) - before == 1  # model node reused, one more hasOMObject


def test_attach_requires_operator_and_wrapper(builder):
    builder.add_structure(StructureNode("Ram", "Component"))
    builder.add_process(ProcessSpec("P", operators=[OperatorSpec("Op", "Ram")]))
    result = om_to_rdf(Variable("x"), BASE, "e", om=V.om)
    builder.graph.update(result.graph)
    with pytest.raises(NotAnOperatorError):
        builder.attach_behavior_model(builder.iri("Ram"), result.object_node)
    with pytest.raises(NotAnObjectError):
        builder.attach_behavior_model(builder.iri("Op"), result.root)


def test_link_variable_to_data_element(builder):
    builder.add_structure(StructureNode("Ram", "Component"))
    element = builder.add_data_element(builder.iri("Ram"), DataElementSpec("Q1_DE", "volume flow"))
    result = om_to_rdf(Variable("Q1"), BASE, "e", om=V.om)
    builder.graph.update(result.graph)
    var_node = result.variables["Q1"]

    before = len(builder.graph)
    builder.link_variable_to_data_element(var_node, element)
    assert len(builder.graph) - before == 1
    builder.link_variable_to_data_element(var_node, element)
    assert len(builder.graph) - before == 1  # idempotent


def test_link_type_mismatches(builder):
    builder.add_structure(StructureNode("Ram", "Component"))
    element = builder.add_data_element(builder.iri("Ram"), DataElementSpec("D", "quantity"))
    with pytest.raises(TypeMismatchError):
        builder.link_variable_to_data_element(Literal("x"), element)
    result = om_to_rdf(Variable("x"), BASE, "e", om=V.om)
    builder.graph.update(result.graph)
    with pytest.raises(TypeMismatchError):
        builder.link_variable_to_data_element(result.variables["x"], builder.iri("Ram"))


def test_observation_four_triples(builder):
    builder.add_structure(StructureNode("Ram", "Component"))
    feature = builder.add_data_element(builder.iri("Ram"), DataElementSpec("Q1_DE", "volume flow"))
    before = len(builder.graph)
    obs = builder.add_observation(feature, 2.0, "m^3/s", "2024-01-01T00:00:00Z")
    assert len(builder.graph) - before == 4
    assert Triple(obs, V.sosa.hasFeatureOfInterest, feature) in builder.graph


def test_observation_bad_timestamp(builder):
    builder.add_structure(StructureNode("Ram", "Component"))
    feature = builder.add_data_element(builder.iri("Ram"), DataElementSpec("D", "quantity"))
    with pytest.raises(InvalidTimestampError):
        builder.add_observation(feature, 1.0, "", "yesterday")
    with pytest.raises(InvalidTimestampError):
        builder.add_observation(feature, 1.0, "", "2024-13-40T99:00:00Z")


def test_two_observations_get_distinct_nodes(builder):
    builder.add_structure(StructureNode("Ram", "Component"))
    feature = builder.add_data_element(builder.iri("Ram"), DataElementSpec("D", "quantity"))
    a = builder.add_observation(feature, 1.0, "", "2024-01-01T00:00:00Z")
    b = builder.add_observation(feature, 2.0, "", "2024-01-01T00:00:01Z")
    assert a != b


def test_slugify():
    assert slugify("Volume flow into chamber 1") == "volume_flow_into_chamber_1"
    assert slugify("unit m^3/s") == "unit_m_3_s"
    assert slugify("  ") == "x"
