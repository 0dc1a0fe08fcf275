import sys

from kthit.cli import build_parser, run


def main(args):
    sys.exit(run(args))


if __name__ == "__main__":
    parser = build_parser()
    args = parser.parse_args()
    main(args)
