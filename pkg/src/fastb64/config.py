from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .alphabet import Alphabet, Variant, get_alphabet


class Padding(enum.Enum):
    #: encode emits '='; decode requires input length divisible by 4
    REQUIRED = "required"
    #: encode omits '='; decode also accepts final groups of 2 or 3 characters
    ALLOW_UNPADDED = "allow-unpadded"


@dataclass(frozen=True)
class CodecConfig:
    variant: Variant = Variant.STANDARD
    padding: Padding = Padding.REQUIRED
    ignore_whitespace: bool = False
    strict: bool = False
    alphabet: Alphabet = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphabet", get_alphabet(self.variant))

    @property
    def pad_output(self) -> bool:
        return self.padding is Padding.REQUIRED


DEFAULT_CONFIG = CodecConfig()
