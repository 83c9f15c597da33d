from wgslab.cli import main

main()
