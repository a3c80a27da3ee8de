# LFR Community Benchmark Package
