// Three structures, nothing else that produces a structure DIE.
struct Point {
  int x;
  int y;
};

struct Rect {
  Point min;
  Point max;
  unsigned char flags;
};

struct Node {
  Node* next;
  int value;
};

Rect g_rect;
Node g_node;
