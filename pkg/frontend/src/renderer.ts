/**
 * Node-link renderer. WebGL2 draws edges as lines and nodes as instanced
 * discs so 10^4-node graphs stay interactive; a Canvas2D fallback keeps the
 * UI alive where WebGL is unavailable. Edges draw first, nodes on top.
 */

import type { ViewTransform } from "./view";

export interface Scene {
  positions: Float64Array; // world xy pairs
  radii: Float64Array;
  edges: Int32Array; // flat (source, target) pairs
  selection: Set<number>;
  pinned: Set<number>;
}

export interface Renderer {
  readonly kind: "webgl" | "canvas2d";
  resize(width: number, height: number, dpr: number): void;
  render(scene: Scene, view: ViewTransform): void;
}

const NODE_FILL = [0.42, 0.62, 0.92];
const NODE_SELECTED = [0.95, 0.73, 0.25];
const NODE_PINNED = [0.88, 0.42, 0.42];
const EDGE_RGBA = "rgba(150, 160, 175, 0.35)";

const nodeVertexSrc = `#version 300 es
layout(location=0) in vec2 corner;       // unit quad
layout(location=1) in vec2 center;       // world units, per instance
layout(location=2) in float radius;      // world units, per instance
layout(location=3) in float flags;       // 0 plain, 1 selected, 2 pinned
uniform vec2 uResolution;                 // device pixels
uniform vec2 uPan;                        // device pixels
uniform float uZoom;
out vec2 vOffset;
flat out float vFlags;
void main() {
  float px = max(radius * uZoom, 1.5);
  vec2 screen = center * uZoom + uPan + corner * (px + 1.0);
  vec2 clip = (screen / uResolution * 2.0 - 1.0) * vec2(1.0, -1.0);
  gl_Position = vec4(clip, 0.0, 1.0);
  vOffset = corner * (px + 1.0) / px;
  vFlags = flags;
}`;

const nodeFragmentSrc = `#version 300 es
precision mediump float;
in vec2 vOffset;
flat in float vFlags;
uniform vec3 uFill;
uniform vec3 uSelected;
uniform vec3 uPinned;
out vec4 outColor;
void main() {
  float d = length(vOffset);
  if (d > 1.0) discard;
  vec3 base = vFlags > 1.5 ? uPinned : uFill;
  float edge = smoothstep(1.0, 0.88, d);
  vec3 color = base;
  if (vFlags > 0.5 && vFlags < 1.5 && d > 0.72) color = uSelected;
  outColor = vec4(color, edge);
}`;

const edgeVertexSrc = `#version 300 es
layout(location=0) in vec2 position;      // world units
uniform vec2 uResolution;
uniform vec2 uPan;
uniform float uZoom;
void main() {
  vec2 screen = position * uZoom + uPan;
  vec2 clip = (screen / uResolution * 2.0 - 1.0) * vec2(1.0, -1.0);
  gl_Position = vec4(clip, 0.0, 1.0);
}`;

const edgeFragmentSrc = `#version 300 es
precision mediump float;
out vec4 outColor;
void main() { outColor = vec4(0.59, 0.63, 0.69, 0.35); }`;

function compileShader(gl: WebGL2RenderingContext, type: number, source: string): WebGLShader {
  const shader = gl.createShader(type);
  if (!shader) throw new Error("failed to create shader");
  gl.shaderSource(shader, source);
  gl.compileShader(shader);
  if (!gl.getShaderParameter(shader, gl.COMPILE_STATUS)) {
    const info = gl.getShaderInfoLog(shader);
    gl.deleteShader(shader);
    throw new Error(`shader compile error: ${info}`);
  }
  return shader;
}

function createProgram(gl: WebGL2RenderingContext, vs: string, fs: string): WebGLProgram {
  const program = gl.createProgram();
  if (!program) throw new Error("failed to create program");
  gl.attachShader(program, compileShader(gl, gl.VERTEX_SHADER, vs));
  gl.attachShader(program, compileShader(gl, gl.FRAGMENT_SHADER, fs));
  gl.linkProgram(program);
  if (!gl.getProgramParameter(program, gl.LINK_STATUS)) {
    throw new Error(`program link error: ${gl.getProgramInfoLog(program)}`);
  }
  return program;
}

class WebGLRenderer implements Renderer {
  readonly kind = "webgl" as const;
  private gl: WebGL2RenderingContext;
  private nodeProgram: WebGLProgram;
  private edgeProgram: WebGLProgram;
  private quadBuffer: WebGLBuffer;
  private instanceBuffer: WebGLBuffer;
  private edgeBuffer: WebGLBuffer;
  private instanceData = new Float32Array(0);
  private edgeData = new Float32Array(0);
  private width = 1;
  private height = 1;
  private dpr = 1;

  constructor(private canvas: HTMLCanvasElement, gl: WebGL2RenderingContext) {
    this.gl = gl;
    this.nodeProgram = createProgram(gl, nodeVertexSrc, nodeFragmentSrc);
    this.edgeProgram = createProgram(gl, edgeVertexSrc, edgeFragmentSrc);
    this.quadBuffer = gl.createBuffer()!;
    gl.bindBuffer(gl.ARRAY_BUFFER, this.quadBuffer);
    gl.bufferData(gl.ARRAY_BUFFER, new Float32Array([-1, -1, 1, -1, -1, 1, 1, 1]), gl.STATIC_DRAW);
    this.instanceBuffer = gl.createBuffer()!;
    this.edgeBuffer = gl.createBuffer()!;
    gl.enable(gl.BLEND);
    gl.blendFunc(gl.SRC_ALPHA, gl.ONE_MINUS_SRC_ALPHA);
  }

  resize(width: number, height: number, dpr: number): void {
    this.width = Math.max(1, Math.floor(width * dpr));
    this.height = Math.max(1, Math.floor(height * dpr));
    this.dpr = dpr;
    this.canvas.width = this.width;
    this.canvas.height = this.height;
    this.gl.viewport(0, 0, this.width, this.height);
  }

  render(scene: Scene, view: ViewTransform): void {
    const gl = this.gl;
    const n = scene.radii.length;
    gl.clearColor(0.078, 0.086, 0.102, 1);
    gl.clear(gl.COLOR_BUFFER_BIT);
    const pan: [number, number] = [view.panX * this.dpr, view.panY * this.dpr];
    const zoom = view.zoom * this.dpr;

    const edgeCount = scene.edges.length / 2;
    if (edgeCount > 0) {
      if (this.edgeData.length !== edgeCount * 4) {
        this.edgeData = new Float32Array(edgeCount * 4);
      }
      for (let e = 0; e < edgeCount; e++) {
        const s = scene.edges[2 * e];
        const t = scene.edges[2 * e + 1];
        this.edgeData[4 * e] = scene.positions[2 * s];
        this.edgeData[4 * e + 1] = scene.positions[2 * s + 1];
        this.edgeData[4 * e + 2] = scene.positions[2 * t];
        this.edgeData[4 * e + 3] = scene.positions[2 * t + 1];
      }
      gl.useProgram(this.edgeProgram);
      gl.uniform2f(gl.getUniformLocation(this.edgeProgram, "uResolution"), this.width, this.height);
      gl.uniform2f(gl.getUniformLocation(this.edgeProgram, "uPan"), pan[0], pan[1]);
      gl.uniform1f(gl.getUniformLocation(this.edgeProgram, "uZoom"), zoom);
      gl.bindBuffer(gl.ARRAY_BUFFER, this.edgeBuffer);
      gl.bufferData(gl.ARRAY_BUFFER, this.edgeData, gl.DYNAMIC_DRAW);
      gl.enableVertexAttribArray(0);
      gl.vertexAttribPointer(0, 2, gl.FLOAT, false, 0, 0);
      gl.vertexAttribDivisor(0, 0);
      gl.drawArrays(gl.LINES, 0, edgeCount * 2);
    }

    if (n > 0) {
      if (this.instanceData.length !== n * 4) {
        this.instanceData = new Float32Array(n * 4);
      }
      for (let i = 0; i < n; i++) {
        this.instanceData[4 * i] = scene.positions[2 * i];
        this.instanceData[4 * i + 1] = scene.positions[2 * i + 1];
        this.instanceData[4 * i + 2] = scene.radii[i];
        this.instanceData[4 * i + 3] = scene.pinned.has(i) ? 2 : scene.selection.has(i) ? 1 : 0;
      }
      gl.useProgram(this.nodeProgram);
      gl.uniform2f(gl.getUniformLocation(this.nodeProgram, "uResolution"), this.width, this.height);
      gl.uniform2f(gl.getUniformLocation(this.nodeProgram, "uPan"), pan[0], pan[1]);
      gl.uniform1f(gl.getUniformLocation(this.nodeProgram, "uZoom"), zoom);
      gl.uniform3f(gl.getUniformLocation(this.nodeProgram, "uFill"), NODE_FILL[0], NODE_FILL[1], NODE_FILL[2]);
      gl.uniform3f(gl.getUniformLocation(this.nodeProgram, "uSelected"), NODE_SELECTED[0], NODE_SELECTED[1], NODE_SELECTED[2]);
      gl.uniform3f(gl.getUniformLocation(this.nodeProgram, "uPinned"), NODE_PINNED[0], NODE_PINNED[1], NODE_PINNED[2]);

      gl.bindBuffer(gl.ARRAY_BUFFER, this.quadBuffer);
      gl.enableVertexAttribArray(0);
      gl.vertexAttribPointer(0, 2, gl.FLOAT, false, 0, 0);
      gl.vertexAttribDivisor(0, 0);

      gl.bindBuffer(gl.ARRAY_BUFFER, this.instanceBuffer);
      gl.bufferData(gl.ARRAY_BUFFER, this.instanceData, gl.DYNAMIC_DRAW);
      gl.enableVertexAttribArray(1);
      gl.vertexAttribPointer(1, 2, gl.FLOAT, false, 16, 0);
      gl.vertexAttribDivisor(1, 1);
      gl.enableVertexAttribArray(2);
      gl.vertexAttribPointer(2, 1, gl.FLOAT, false, 16, 8);
      gl.vertexAttribDivisor(2, 1);
      gl.enableVertexAttribArray(3);
      gl.vertexAttribPointer(3, 1, gl.FLOAT, false, 16, 12);
      gl.vertexAttribDivisor(3, 1);

      gl.drawArraysInstanced(gl.TRIANGLE_STRIP, 0, 4, n);
    }
  }
}

class Canvas2DRenderer implements Renderer {
  readonly kind = "canvas2d" as const;
  private ctx: CanvasRenderingContext2D;
  private dpr = 1;

  constructor(private canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("no 2d context available");
    this.ctx = ctx;
  }

  resize(width: number, height: number, dpr: number): void {
    this.dpr = dpr;
    this.canvas.width = Math.max(1, Math.floor(width * dpr));
    this.canvas.height = Math.max(1, Math.floor(height * dpr));
  }

  render(scene: Scene, view: ViewTransform): void {
    const ctx = this.ctx;
    const dpr = this.dpr;
    ctx.setTransform(1, 0, 0, 1, 0, 0);
    ctx.fillStyle = "#14161a";
    ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);
    ctx.setTransform(dpr, 0, 0, dpr, 0, 0);

    ctx.strokeStyle = EDGE_RGBA;
    ctx.lineWidth = 1;
    ctx.beginPath();
    for (let e = 0; e < scene.edges.length; e += 2) {
      const s = scene.edges[e];
      const t = scene.edges[e + 1];
      ctx.moveTo(scene.positions[2 * s] * view.zoom + view.panX,
                 scene.positions[2 * s + 1] * view.zoom + view.panY);
      ctx.lineTo(scene.positions[2 * t] * view.zoom + view.panX,
                 scene.positions[2 * t + 1] * view.zoom + view.panY);
    }
    ctx.stroke();

    for (let i = 0; i < scene.radii.length; i++) {
      const x = scene.positions[2 * i] * view.zoom + view.panX;
      const y = scene.positions[2 * i + 1] * view.zoom + view.panY;
      const r = Math.max(scene.radii[i] * view.zoom, 1.5);
      ctx.beginPath();
      ctx.arc(x, y, r, 0, 2 * Math.PI);
      ctx.fillStyle = scene.pinned.has(i) ? "#e06b6b" : "#6b9eeb";
      ctx.fill();
      if (scene.selection.has(i)) {
        ctx.strokeStyle = "#f2ba40";
        ctx.lineWidth = 2;
        ctx.stroke();
      }
    }
  }
}

export function createRenderer(canvas: HTMLCanvasElement): Renderer {
  const gl = canvas.getContext("webgl2", { antialias: true });
  if (gl) return new WebGLRenderer(canvas, gl);
  return new Canvas2DRenderer(canvas);
}
