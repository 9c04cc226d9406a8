"""Intersection numbers, Riemann-Roch, positivity rules and the certificate."""
from .certificate import (
    ASSUMED, CITATIONS, CITED, FAILED, STATUS_RANK, VERDICT, VERIFIED_NUMERIC,
    VERIFIED_SYMBOLIC, CertStep, Certificate, Reports, assemble_certificate, collect_reports,
    nef_big_certificate, riemann_roch_chain, verify,
)
from .lattice import FIBER, Y, NSClass, class_L, euler_char, intersect, intersection_matrix
from .rules import IMPLICATION_RULES, PROPERTIES, ImplicationRule, implication_graph, rule_path

__all__ = [
    "ASSUMED", "CITATIONS", "CITED", "FAILED", "STATUS_RANK", "VERDICT", "VERIFIED_NUMERIC",
    "VERIFIED_SYMBOLIC", "CertStep", "Certificate", "Reports", "assemble_certificate",
    "collect_reports", "nef_big_certificate", "riemann_roch_chain", "verify",
    "FIBER", "Y", "NSClass", "class_L", "euler_char", "intersect", "intersection_matrix",
    "IMPLICATION_RULES", "PROPERTIES", "ImplicationRule", "implication_graph", "rule_path",
]
