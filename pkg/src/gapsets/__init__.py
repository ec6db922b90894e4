"""Gapsets, Kunz coordinates and the counts n'_{g,l}."""
from .core import (AperySet, CanonicalPartition, Gapset, GapsetError, InvalidGapsetError,
                   InvalidKunzTupleError, KunzTuple, KunzViolation, UndefinedInvariantError,
                   check_kunz_system, format_kunz, gamma_prime_levels, gapset_from_kunz,
                   gapset_witness, is_gapset, kunz_violation, parse_gaps, parse_kunz)
from .enumeration import (BudgetExceededError, CountCache, CountTable, GenusTooLargeError,
                          build_table, count_n, count_n_prime, enumerate_gamma_prime,
                          enumerate_gapsets, enumerate_gapsets_naive, enumerate_kunz,
                          in_gamma_prime, n_prime_column)
from .maps import (MapDomainError, VerificationReport, drop_last_coordinate,
                   extend_by_coordinate, extend_kunz, partition_by_last_coordinate,
                   truncate_kunz, verify_theorem)

__version__ = "0.1.0"
