# dualfft tests
