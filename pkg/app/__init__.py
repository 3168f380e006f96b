"""wavespec: forward and inverse spectral engine."""
