"""
Contract extraction from doc comments.
"""
from .extractor import ContractExtractor, extract_contracts, extract_program
from .model import Contract, ExtractionResult, SkipRecord, Term
from .translator import TranslationScope, translate_condition

__all__ = [
    "ContractExtractor",
    "extract_contracts",
    "extract_program",
    "Contract",
    "ExtractionResult",
    "SkipRecord",
    "Term",
    "TranslationScope",
    "translate_condition",
]
