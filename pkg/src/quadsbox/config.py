"""
Configuration constants for the quadrinomial S-box toolkit.
"""

# Field construction limits
FIELD_MAX_N = 24  # Largest supported extension degree n = 2m
LOG_TABLE_MAX_N = 20  # Log/antilog tables are built up to this n

# Table analytics limits
FULL_TABLE_MAX_N = 12  # Full 2^n x 2^n DDT/BCT matrices are only kept up to this n
ANALYTICS_MAX_N = 16  # DDT/BCT computations are refused above this n
ROW_BLOCK_SIZE = 64  # DDT rows computed per vectorized block

# Theorem verification
TZ_EXHAUSTIVE_MAX_N = 6  # Per-a checks run over every a up to this n
TZ_SAMPLE_SIZE = 64  # Number of sampled a values above that n

# Search campaigns
EXHAUSTIVE_MAX_LOG2 = 28  # Tuple space 2^(4n) must not exceed this
DEFAULT_SEED = 42
BETA_FIRST_N_DEFAULT = 1000  # Full BCT budget per Gamma class
SAMPLE_CHUNK_SIZE = 4096  # Sampled tuples per PRNG child stream
TABLE_BATCH_SIZE = 16384  # Tuples per vectorized classification batch
GAMMA_SAMPLER_BATCH = 1 << 14  # Draws per rejection-sampling round
GAMMA_SAMPLER_MAX_ROUNDS = 4096

# Environment overrides
ENV_THREADS = "QUADSBOX_THREADS"
ENV_FLUSH = "QUADSBOX_FLUSH"
ENV_LOG_LEVEL = "QUADSBOX_LOG_LEVEL"

# Verification suites
FIELD_SUITE_SAMPLE_SIZE = 100_000  # Random (x, y, z) triples for the field suite above TZ_EXHAUSTIVE_MAX_N
SUITE_SAMPLE_SIZE = 10_000  # Random (c, a, b) inputs per sampled suite
SUITE_GAMMA_MEMBERS = 10_000  # Gamma members drawn for the identities and vi suites
SUITE_THEOREM_TUPLES = 20  # Tuples per Gamma class for the theorem suite
LEMMA_CORE_EXHAUSTIVE_MAX_N = 10  # Every (tau, nu) pair is compared up to this n
LEMMA_CORE_SAMPLED_TAUS = 256
CONVERSE_FINDINGS_MAX = 1000  # Non-Gamma permutation tuples kept verbatim in a summary
TABLE_BATCH_ELEMENTS = 1 << 20  # Lookup-table entries materialized per permutation batch
