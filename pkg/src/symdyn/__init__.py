"""Subshifts of finite type over finitely generated groups.

Word-problem contexts, patterns and pattern presentations, SFT languages and
the metric on subshifts, sliding block codes with their pullbacks, and
fuel-bounded semi-decision procedures that emit replayable certificates.
"""

from .certificates import Certificate, verify_certificate
from .decide import (LanguageOracle, greedy_point_extract, medvedev_zero_witness,
                     nonmembership_semidecide, proper_containment_detect)
from .groups import FreeGroup, GroupCtx, PresentedGroup, ZdGroup, element_key, group_from_doc
from .morphism import (FreeLift, LocalRule, build_Yp, forbid_additionally, lift_to_free, phi_pattern,
                       pullback_sft)
from .oned import debruijn, in_language_1d, language_exact_1d, words_1d
from .patterns import (Pattern, PatternPresentation, consistency_check, extensions, from_word,
                       occurs_in, realize, restrict, to_word, translate)
from .subshift import (LangApprox, Sft, language_upper, locally_admissible, metric_D, sft_build,
                       subset_semidecide, wang_sft)
from .verdict import FuelVerdict, Status

__all__ = [
    "Certificate", "verify_certificate",
    "LanguageOracle", "greedy_point_extract", "medvedev_zero_witness",
    "nonmembership_semidecide", "proper_containment_detect",
    "FreeGroup", "GroupCtx", "PresentedGroup", "ZdGroup", "element_key", "group_from_doc",
    "FreeLift", "LocalRule", "build_Yp", "forbid_additionally", "lift_to_free", "phi_pattern",
    "pullback_sft",
    "debruijn", "in_language_1d", "language_exact_1d", "words_1d",
    "Pattern", "PatternPresentation", "consistency_check", "extensions", "from_word",
    "occurs_in", "realize", "restrict", "to_word", "translate",
    "LangApprox", "Sft", "language_upper", "locally_admissible", "metric_D", "sft_build",
    "subset_semidecide", "wang_sft",
    "FuelVerdict", "Status",
]
