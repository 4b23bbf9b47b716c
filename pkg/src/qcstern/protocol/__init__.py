from .core import (Challenge1, Challenge2, ProtocolError, ProverState, PublicKey, SecretKey,
                   Verifier, cmt1_bytes, cmt2_bytes, expand_secrets, keygen, prover_commit1,
                   prover_commit2, prover_respond, prover_responses, run_interactive, verify)
from .oracles import (DSDSolution, ExtractionFailure, Transcript, extract_dsd,
                      simulate_transcript, verify_dsd_solution)
from .stern import (STRATEGIES, CheatingProver, SternProver, SternTranscript,
                    stern_baseline_round, stern_baseline_verify, stern_cheat)
