from __future__ import annotations

from pathlib import Path

import pytest

from mutexcover.errors import PddlError
from mutexcover.pddl import parse_domain, parse_pddl, parse_problem

FERRY = Path(__file__).resolve().parent.parent / "instances" / "ferry"


def ferry_texts():
    return (FERRY / "domain.pddl").read_text(), (FERRY / "problem.pddl").read_text()


TINY_DOMAIN = """
(define (domain tiny)
  (:requirements :strips :typing)
  (:types block)
  (:predicates (clear ?b - block) (held ?b - block))
  (:action grab
    :parameters (?b - block)
    :precondition (clear ?b)
    :effect (and (held ?b) (not (clear ?b)))))
"""

TINY_PROBLEM = """
(define (problem tiny-1)
  (:domain tiny)
  (:objects b1 b2 - block)
  (:init (clear b1) (clear b2))
  (:goal (and (held b1) (held b2))))
"""


def test_ferry_grounding():
    p = parse_pddl(*ferry_texts())
    assert len(p.fluents) == 11
    assert "ferry_at(island_a)" in p.fluents
    assert "just_moved(ferry,island_b)" in p.fluents
    assert p.init == frozenset({"ferry_at(island_a)", "car_at(island_a)"})
    assert p.goal == frozenset({"car_at(island_c)"})
    # 3x3 sails + 3 start_loading + 3 finish_loading + 3 debark
    assert len(p.actions) == 18


def test_tiny_grounding():
    p = parse_pddl(TINY_DOMAIN, TINY_PROBLEM)
    assert p.fluents == frozenset({"clear(b1)", "clear(b2)", "held(b1)", "held(b2)"})
    grab = p.action_by_name("grab(b1)")
    assert grab.pre == frozenset({"clear(b1)"})
    assert grab.add == frozenset({"held(b1)"})
    assert grab.delete == frozenset({"clear(b1)"})


def test_unsupported_requirement_named():
    bad = TINY_DOMAIN.replace(":strips :typing", ":strips :negative-preconditions")
    with pytest.raises(PddlError, match=":negative-preconditions"):
        parse_domain(bad)


def test_negative_precondition_rejected():
    bad = TINY_DOMAIN.replace("(clear ?b)\n    :effect", "(not (held ?b))\n    :effect")
    with pytest.raises(PddlError, match="negative preconditions"):
        parse_domain(bad)


def test_syntax_error_carries_position():
    with pytest.raises(PddlError) as exc:
        parse_domain("(define (domain broken)\n  (:predicates (p))")
    err = exc.value
    assert err.line == 1 and err.column == 1  # the unclosed top-level paren


def test_type_hierarchy():
    dom = """
    (define (domain typed)
      (:requirements :strips :typing)
      (:types truck car - vehicle vehicle - object)
      (:predicates (moving ?v - vehicle))
      (:action go
        :parameters (?v - vehicle)
        :precondition (moving ?v)
        :effect (moving ?v)))
    """
    prob = """
    (define (problem typed-1)
      (:domain typed)
      (:objects t1 - truck c1 - car)
      (:init (moving t1))
      (:goal (moving t1)))
    """
    p = parse_pddl(dom, prob)
    assert p.fluents == frozenset({"moving(t1)", "moving(c1)"})
    assert {a.name for a in p.actions} == {"go(t1)", "go(c1)"}


def test_delete_then_add_normalization():
    dom = """
    (define (domain toggler)
      (:requirements :strips)
      (:predicates (on) (spin))
      (:action cycle
        :parameters ()
        :precondition (on)
        :effect (and (on) (spin) (not (on)))))
    """
    prob = """
    (define (problem t1) (:domain toggler) (:init (on)) (:goal (spin)))
    """
    p = parse_pddl(dom, prob)
    a = p.action_by_name("cycle")
    assert "on" in a.add and "on" not in a.delete


def test_undeclared_init_atom_rejected():
    bad = TINY_PROBLEM.replace("(clear b1)", "(flying b1)")
    with pytest.raises(PddlError, match="flying"):
        parse_pddl(TINY_DOMAIN, bad)


def test_neededness_pruning():
    dom = """
    (define (domain prune)
      (:requirements :strips :typing)
      (:types item)
      (:predicates (have ?i - item) (want ?i - item) (happy))
      (:action get
        :parameters (?i - item)
        :precondition (want ?i)
        :effect (have ?i)))
    """
    prob = """
    (define (problem p1)
      (:domain prune)
      (:objects x y - item)
      (:init (want x))
      (:goal (have x)))
    """
    full = parse_pddl(dom, prob)
    pruned = parse_pddl(dom, prob, neededness=True)
    assert len(pruned.fluents) < len(full.fluents)
    assert len(pruned.actions) < len(full.actions)
    assert "have(x)" in pruned.fluents
    assert "have(y)" not in pruned.fluents


def test_comments_and_case_insensitivity():
    dom = TINY_DOMAIN.replace("(define", "; leading comment\n(DEFINE")
    assert parse_domain(dom).name == "tiny"


def test_problem_requires_name():
    with pytest.raises(PddlError):
        parse_problem("(define (:domain tiny))")
