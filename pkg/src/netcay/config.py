"""Process-wide size limits.

The CLI's ``--order-cap`` flag writes here; library calls may also pass an
explicit cap to override.
"""

from dataclasses import dataclass


@dataclass
class Limits:
    order_cap: int = 128
    aut_cap: int = 1_000_000
    graph_cap: int = 4096
    oracle_cap: int = 16
    enumeration_cap: int = 60


limits = Limits()
