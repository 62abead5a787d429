"""Questionnaire -> decision tree (prefix trie) -> flat rule set."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import EmptyEnsemble, EmptyQuestionnaire, SchemaMismatch
from .model import (
    Questionnaire,
    QuestionnaireSchema,
    Rule,
    alternatives,
    antecedent_for,
)


@dataclass
class Leaf:
    posterior: str


@dataclass
class TreeNode:
    """Internal node. Children are keyed by the edge's answer value.

    Nodes at full depth hold leaves instead of children; more than one leaf
    appears there only when different courses share every answer.
    """

    children: dict = field(default_factory=dict)
    leaves: list[Leaf] = field(default_factory=list)


@dataclass
class DecisionTree:
    expert_id: str
    schema: QuestionnaireSchema
    root: TreeNode
    provenance: str = ""

    def paths(self) -> Iterator[tuple[tuple, str]]:
        """Yield (edge labels, posterior) for every leaf, depth first."""

        def walk(node: TreeNode, prefix: tuple):
            for leaf in node.leaves:
                yield prefix, leaf.posterior
            for label, child in node.children.items():
                yield from walk(child, prefix + (label,))

        yield from walk(self.root, ())

    @property
    def leaf_count(self) -> int:
        return sum(1 for _ in self.paths())

    def depths(self) -> set[int]:
        return {len(path) for path, _ in self.paths()}


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[Rule, ...]
    expert_id: str
    schema: QuestionnaireSchema
    provenance: str = ""

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


def questionnaire_digest(q: Questionnaire) -> str:
    from .formats import serialize_questionnaire

    text = serialize_questionnaire(q)
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def expand_row(cells: Sequence, schema: QuestionnaireSchema) -> Iterator[tuple]:
    """Cartesian expansion of one row into single-valued answer tuples."""
    options = [alternatives(c, q) for c, q in zip(cells, schema.questions)]

    def rec(i: int, prefix: tuple):
        if i == len(options):
            yield prefix
            return
        for value in options[i]:
            yield from rec(i + 1, prefix + (value,))

    yield from rec(0, ())


def build_tree(q: Questionnaire) -> DecisionTree:
    if not q.rows:
        raise EmptyQuestionnaire(f"questionnaire of expert {q.expert_id!r} has no rows")
    root = TreeNode()
    for course, cells in q.rows.items():
        for path in expand_row(cells, q.schema):
            node = root
            for value in path:
                node = node.children.setdefault(value, TreeNode())
            if all(leaf.posterior != course for leaf in node.leaves):
                node.leaves.append(Leaf(course))
    return DecisionTree(q.expert_id, q.schema, root, questionnaire_digest(q))


def extract_rules(tree: DecisionTree) -> RuleSet:
    """One rule per leaf, in depth-first leaf order."""
    rules = []
    for i, (path, course) in enumerate(tree.paths(), start=1):
        ants = tuple(
            antecedent_for(question, value, course)
            for question, value in zip(tree.schema.questions, path)
        )
        rules.append(Rule(ants, course, origin=(tree.expert_id, i)))
    return RuleSet(tuple(rules), tree.expert_id, tree.schema, tree.provenance)


def compile_kb(questionnaires: Sequence[Questionnaire]) -> list[RuleSet]:
    if not questionnaires:
        raise EmptyEnsemble("no questionnaires to compile")
    schema = questionnaires[0].schema
    for q in questionnaires[1:]:
        if q.schema != schema:
            raise SchemaMismatch(
                f"expert {q.expert_id!r} uses a different schema than "
                f"{questionnaires[0].expert_id!r}"
            )
    return [extract_rules(build_tree(q)) for q in questionnaires]
