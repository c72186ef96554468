from layoutbench.cli import main

main()
