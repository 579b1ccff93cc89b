"""Training over sparse multipath channels in the low-SNR regime."""
